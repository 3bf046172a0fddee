#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace specavg {

// One atom of a finite point measure on the real line.
struct Atom {
    double location = 0.0;
    double weight = 0.0;
};

// Finite atomic measure: strictly increasing locations, nonnegative weights.
// Atoms closer than kMergeTol relative to the spectral diameter are merged.
class PointMeasure {
public:
    static constexpr double kMergeTol = 1e-12;

    PointMeasure() = default;
    explicit PointMeasure(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    bool empty() const { return atoms_.empty(); }
    std::size_t size() const { return atoms_.size(); }

    double total_mass() const;
    double max_atom_weight() const;

    // Mass of the closed interval [a, b]; boundary atoms are included.
    double restrict_mass(double a, double b) const;

    // s(mu, eps) = sup over windows [a, a+eps] of the window mass, exact.
    double modulus_of_continuity(double eps) const;

private:
    std::vector<Atom> atoms_;
};

// Fixed-width histogram; bin i covers [origin + i*w, origin + (i+1)*w).
class BinnedMeasure {
public:
    BinnedMeasure() = default;
    BinnedMeasure(double origin, double bin_width, std::vector<double> masses);

    double origin() const { return origin_; }
    double bin_width() const { return bin_width_; }
    const std::vector<double>& masses() const { return masses_; }
    std::size_t bin_count() const { return masses_.size(); }

    double total_mass() const;

    // Mass of [a, b] by fractional bin overlap.
    double restrict_mass(double a, double b) const;

    // Sliding-window maximum; the window is rounded UP to whole bins, so the
    // result overestimates s(mu, eps). The rounding is part of the contract.
    double modulus_of_continuity(double eps) const;

private:
    double origin_ = 0.0;
    double bin_width_ = 1.0;
    std::vector<double> masses_;
};

// Exact histogram of an atomic measure. The range [lo, hi) must contain the
// support; escaping atoms raise an error that reports the lost mass.
BinnedMeasure bin_measure(const PointMeasure& m, double bin_width, double lo, double hi);

// Histogram with linear sharing of each atom between its two nearest bin
// centers. Mass-conserving for atoms away from the range boundary, and the
// bin masses depend continuously on atom locations; used when two
// independently quadratured measures are compared at a common resolution.
BinnedMeasure bin_measure_linear(const PointMeasure& m, double bin_width, double lo, double hi);

// Canonicalized weighted union; associative and commutative up to
// canonicalization. Negative weights are rejected.
PointMeasure merge(const std::vector<std::pair<PointMeasure, double>>& parts);

// Window-width ladder and the corresponding density diagnostics.
struct ContinuityReport {
    std::vector<double> epsilons;     // decreasing
    std::vector<double> s_values;     // s(m, eps)
    std::vector<double> density_sup;  // s(m, eps) / eps
};

ContinuityReport continuity_ladder(const PointMeasure& m, const std::vector<double>& epsilons);
ContinuityReport continuity_ladder(const BinnedMeasure& m, const std::vector<double>& epsilons);

// L1 distance between two histograms on the same grid.
double l1_distance(const BinnedMeasure& a, const BinnedMeasure& b);
// Total-variation distance = half the L1 distance.
double tv_distance(const BinnedMeasure& a, const BinnedMeasure& b);

// CSV: "location,weight" / "bin_left,mass" / "epsilon,s_value,density_sup";
// floats at 17 significant digits.
void write_csv(std::ostream& os, const PointMeasure& m);
void write_csv(std::ostream& os, const BinnedMeasure& m);
void write_csv(std::ostream& os, const ContinuityReport& r);

std::string format_double(double x);

}  // namespace specavg
