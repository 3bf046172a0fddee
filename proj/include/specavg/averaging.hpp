#pragma once

#include "specavg/measure.hpp"
#include "specavg/spectral.hpp"
#include "specavg/weight_profile.hpp"

namespace specavg {

// nu = sum_j w_j h(t_j) rho_{A + t_j B}^Phi.  Total mass ||Phi||^2 * integral(h)
// within quadrature tolerance. Warns on stderr (does not fail) when Phi lies
// outside Range(B): the negative controls depend on violating the hypothesis.
PointMeasure average_spectral_measure(const OperatorPair& pair, const Vector& phi,
                                      const WeightProfile& h, const QuadratureRule& rule);

// Family A + tanh(t) B averaged against g (g is the already-squared |g|^2).
PointMeasure tanh_family_average(const OperatorPair& pair, const Vector& phi,
                                 const WeightProfile& g, const QuadratureRule& rule);

// Exact density of nu when dim = 1 and H(t) = a + t b: s -> h((s-a)/b)/b.
class ScalarOracle {
public:
    ScalarOracle(double a, double b, WeightProfile h);

    double density(double s) const;
    double integral() const { return h_.integral(); }
    // Exact per-bin masses of the oracle density on the given grid.
    BinnedMeasure binned(double bin_width, double lo, double hi) const;

private:
    double a_, b_;
    WeightProfile h_;
};

struct ChangeOfVariablesReport {
    double tv_distance = 0.0;      // between the two binned measures
    double lhs_mass = 0.0;         // quadrature mass of the tanh-family side
    double rhs_mass = 0.0;         // quadrature mass of the substituted side
    double discarded_mass = 0.0;   // g-mass outside the truncated s-range
    double bin_width = 0.0;
};

// Compares  int rho_{A + tanh(t) B}^Phi g(t) dt  against the substituted
// integral  int rho_{A + s B}^Phi g(artanh s)/(1-s^2) ds  over
// s in (-1+delta, 1-delta), both quadratured independently with n_nodes and
// compared at a common histogram resolution (linear-sharing assignment).
ChangeOfVariablesReport change_of_variables_check(const OperatorPair& pair, const Vector& phi,
                                                  const WeightProfile& g, int n_nodes,
                                                  double delta, double bin_width = 0.05);

struct SmoothingContrast {
    ContinuityReport averaged;   // ladder of nu (atomic, exact windows)
    ContinuityReport single_t;   // ladder of rho_{H(t0)}^Phi at the midpoint
    double max_atom_weight_single = 0.0;
    double empirical_ratio = 0.0;  // max over ladder of s(nu,eps) / (eps * sup h)
};

SmoothingContrast smoothing_contrast(const OperatorPair& pair, const Vector& phi,
                                     const WeightProfile& h, const QuadratureRule& rule,
                                     const std::vector<double>& epsilons);

}  // namespace specavg
