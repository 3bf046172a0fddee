#pragma once

#include <string>
#include <vector>

namespace specavg {

// Compactly supported nonnegative integrable density h. Analytic kinds carry
// closed-form integrals; tables are piecewise linear with trapezoid
// integration. The discrete kind is a finite atomic probability law used
// where a coupling distribution with point masses is required; it is not a
// Lebesgue density and may not be passed to the quadrature-based averages.
class WeightProfile {
public:
    enum class Kind { Uniform, Triangular, TruncatedGaussian, Table, Discrete };

    static WeightProfile uniform(double a, double b, double height = 1.0);
    static WeightProfile triangular(double a, double b);  // peak at midpoint, height 2/(b-a)
    static WeightProfile truncated_gaussian(double mu, double sigma, double a, double b);
    static WeightProfile table(std::vector<double> knots, std::vector<double> values);
    static WeightProfile discrete(std::vector<double> points, std::vector<double> probs);

    Kind kind() const { return kind_; }
    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }

    double value(double t) const;   // density value (0 outside support)
    double integral() const;        // total weight of h
    double integral_to(double t) const;  // cumulative integral over (-inf, t]

    // Inverse CDF of the normalized law; u in [0,1).
    double inverse_cdf(double u) const;

    bool is_discrete() const { return kind_ == Kind::Discrete; }
    const std::vector<double>& points() const { return knots_; }
    const std::vector<double>& weights() const { return values_; }

    std::string describe() const;

private:
    WeightProfile() = default;
    Kind kind_ = Kind::Uniform;
    double lo_ = 0.0, hi_ = 1.0;
    double p0_ = 0.0, p1_ = 1.0;        // kind parameters (mu/sigma, height)
    std::vector<double> knots_, values_;
};

// Quadrature nodes inside the support of a profile. Default construction is
// composite Gauss-Legendre with two nodes per uniform panel; the rule is
// validated against the profile's closed-form integral on construction.
class QuadratureRule {
public:
    static QuadratureRule for_profile(const WeightProfile& h, int n_nodes,
                                      int nodes_per_panel = 2);
    // Composite Gauss-Legendre over [a, b] without the profile check.
    static QuadratureRule composite_gauss(double a, double b, int n_nodes,
                                          int nodes_per_panel = 2);

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return nodes_.size(); }

private:
    std::vector<double> nodes_, weights_;
};

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int q, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace specavg
