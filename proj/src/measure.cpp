#include "specavg/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace specavg {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

PointMeasure::PointMeasure(std::vector<Atom> atoms) {
    for (const Atom& a : atoms) {
        if (a.weight < 0.0) throw std::invalid_argument("PointMeasure: negative weight");
        if (!std::isfinite(a.location) || !std::isfinite(a.weight))
            throw std::invalid_argument("PointMeasure: non-finite atom");
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    if (atoms.empty()) return;

    const double diameter = atoms.back().location - atoms.front().location;
    const double scale = std::max({1.0, std::abs(atoms.front().location),
                                   std::abs(atoms.back().location), diameter});
    const double tol = kMergeTol * scale;

    atoms_.reserve(atoms.size());
    for (const Atom& a : atoms) {
        if (!atoms_.empty() && a.location - atoms_.back().location <= tol) {
            // weighted centroid keeps merged degenerate eigenvalues stable
            Atom& last = atoms_.back();
            const double w = last.weight + a.weight;
            if (w > 0.0)
                last.location = (last.location * last.weight + a.location * a.weight) / w;
            last.weight = w;
        } else {
            atoms_.push_back(a);
        }
    }

    // negligible atoms (e.g. |<psi,Phi>|^2 roundoff for orthogonal pairs)
    // carry no measure-theoretic content and break atom-count expectations
    double total = 0.0;
    for (const Atom& a : atoms_) total += a.weight;
    const double weight_floor = 1e-15 * total;
    std::erase_if(atoms_, [&](const Atom& a) { return a.weight <= weight_floor; });
}

double PointMeasure::total_mass() const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.weight;
    return s;
}

double PointMeasure::max_atom_weight() const {
    double w = 0.0;
    for (const Atom& a : atoms_) w = std::max(w, a.weight);
    return w;
}

double PointMeasure::restrict_mass(double a, double b) const {
    if (a > b) throw std::invalid_argument("restrict: malformed interval (a > b)");
    double s = 0.0;
    for (const Atom& at : atoms_)
        if (at.location >= a && at.location <= b) s += at.weight;
    return s;
}

double PointMeasure::modulus_of_continuity(double eps) const {
    if (eps <= 0.0) throw std::invalid_argument("modulus_of_continuity: eps must be positive");
    if (atoms_.empty()) return 0.0;
    // Two-pointer sweep over windows [x_i, x_i + eps]; the supremum is
    // attained with the left edge at an atom.
    double best = 0.0;
    std::size_t j = 0;
    double run = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (j < i) {
            j = i;
            run = 0.0;
        }
        while (j < atoms_.size() && atoms_[j].location <= atoms_[i].location + eps) {
            run += atoms_[j].weight;
            ++j;
        }
        best = std::max(best, run);
        run -= atoms_[i].weight;
    }
    return best;
}

BinnedMeasure::BinnedMeasure(double origin, double bin_width, std::vector<double> masses)
    : origin_(origin), bin_width_(bin_width), masses_(std::move(masses)) {
    if (bin_width_ <= 0.0) throw std::invalid_argument("BinnedMeasure: bin_width must be positive");
    for (double m : masses_)
        if (m < 0.0) throw std::invalid_argument("BinnedMeasure: negative mass");
}

double BinnedMeasure::total_mass() const {
    double s = 0.0;
    for (double m : masses_) s += m;
    return s;
}

double BinnedMeasure::restrict_mass(double a, double b) const {
    if (a > b) throw std::invalid_argument("restrict: malformed interval (a > b)");
    double s = 0.0;
    for (std::size_t i = 0; i < masses_.size(); ++i) {
        const double lo = origin_ + static_cast<double>(i) * bin_width_;
        const double hi = lo + bin_width_;
        const double overlap = std::min(b, hi) - std::max(a, lo);
        if (overlap > 0.0) s += masses_[i] * (overlap / bin_width_);
    }
    return s;
}

double BinnedMeasure::modulus_of_continuity(double eps) const {
    if (eps <= 0.0) throw std::invalid_argument("modulus_of_continuity: eps must be positive");
    if (masses_.empty()) return 0.0;
    std::size_t k = static_cast<std::size_t>(std::ceil(eps / bin_width_ - 1e-9));
    k = std::max<std::size_t>(k, 1);
    k = std::min(k, masses_.size());
    double run = 0.0;
    for (std::size_t i = 0; i < k; ++i) run += masses_[i];
    double best = run;
    for (std::size_t i = k; i < masses_.size(); ++i) {
        run += masses_[i] - masses_[i - k];
        best = std::max(best, run);
    }
    return best;
}

BinnedMeasure bin_measure(const PointMeasure& m, double bin_width, double lo, double hi) {
    if (bin_width <= 0.0) throw std::invalid_argument("bin: bin_width must be positive");
    if (hi <= lo) throw std::invalid_argument("bin: empty range");
    const std::size_t nbins =
        static_cast<std::size_t>(std::ceil((hi - lo) / bin_width - 1e-9));
    std::vector<double> masses(std::max<std::size_t>(nbins, 1), 0.0);
    double escaped = 0.0;
    for (const Atom& a : m.atoms()) {
        if (a.location < lo || a.location >= lo + static_cast<double>(masses.size()) * bin_width) {
            escaped += a.weight;
            continue;
        }
        auto idx = static_cast<std::size_t>((a.location - lo) / bin_width);
        if (idx >= masses.size()) idx = masses.size() - 1;
        masses[idx] += a.weight;
    }
    if (escaped > 0.0)
        throw std::invalid_argument("bin: atoms outside range, escaping mass = " +
                                    format_double(escaped));
    return BinnedMeasure(lo, bin_width, std::move(masses));
}

BinnedMeasure bin_measure_linear(const PointMeasure& m, double bin_width, double lo, double hi) {
    if (bin_width <= 0.0) throw std::invalid_argument("bin: bin_width must be positive");
    if (hi <= lo) throw std::invalid_argument("bin: empty range");
    const std::size_t nbins =
        static_cast<std::size_t>(std::ceil((hi - lo) / bin_width - 1e-9));
    std::vector<double> masses(std::max<std::size_t>(nbins, 1), 0.0);
    const double first_center = lo + 0.5 * bin_width;
    const auto n = static_cast<long>(masses.size());
    for (const Atom& a : m.atoms()) {
        const double f = (a.location - first_center) / bin_width;
        const auto i0 = static_cast<long>(std::floor(f));
        const double frac = f - static_cast<double>(i0);
        const long j0 = std::clamp(i0, 0L, n - 1);
        const long j1 = std::clamp(i0 + 1, 0L, n - 1);
        masses[static_cast<std::size_t>(j0)] += a.weight * (1.0 - frac);
        masses[static_cast<std::size_t>(j1)] += a.weight * frac;
    }
    return BinnedMeasure(lo, bin_width, std::move(masses));
}

PointMeasure merge(const std::vector<std::pair<PointMeasure, double>>& parts) {
    std::vector<Atom> all;
    std::size_t total = 0;
    for (const auto& [m, w] : parts) {
        if (w < 0.0) throw std::invalid_argument("merge: negative weight");
        total += m.size();
    }
    all.reserve(total);
    for (const auto& [m, w] : parts)
        for (const Atom& a : m.atoms()) all.push_back({a.location, a.weight * w});
    return PointMeasure(std::move(all));
}

namespace {

template <typename M>
ContinuityReport ladder_impl(const M& m, const std::vector<double>& epsilons) {
    if (epsilons.empty()) throw std::invalid_argument("continuity_ladder: empty ladder");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (epsilons[i] <= 0.0)
            throw std::invalid_argument("continuity_ladder: eps must be positive");
        if (i > 0 && epsilons[i] >= epsilons[i - 1])
            throw std::invalid_argument("continuity_ladder: ladder must be strictly decreasing");
    }
    ContinuityReport r;
    r.epsilons = epsilons;
    for (double eps : epsilons) {
        const double s = m.modulus_of_continuity(eps);
        r.s_values.push_back(s);
        r.density_sup.push_back(s / eps);
    }
    // monotonicity invariant: s nondecreasing in eps (ladder is decreasing)
    for (std::size_t i = 1; i < r.s_values.size(); ++i)
        if (r.s_values[i] > r.s_values[i - 1] * (1.0 + 1e-12))
            throw std::logic_error("continuity_ladder: monotonicity violated");
    return r;
}

}  // namespace

ContinuityReport continuity_ladder(const PointMeasure& m, const std::vector<double>& epsilons) {
    return ladder_impl(m, epsilons);
}

ContinuityReport continuity_ladder(const BinnedMeasure& m, const std::vector<double>& epsilons) {
    return ladder_impl(m, epsilons);
}

double l1_distance(const BinnedMeasure& a, const BinnedMeasure& b) {
    if (a.bin_count() != b.bin_count() || a.bin_width() != b.bin_width() ||
        std::abs(a.origin() - b.origin()) > 1e-12 * a.bin_width())
        throw std::invalid_argument("l1_distance: histogram grids differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.bin_count(); ++i)
        s += std::abs(a.masses()[i] - b.masses()[i]);
    return s;
}

double tv_distance(const BinnedMeasure& a, const BinnedMeasure& b) {
    return 0.5 * l1_distance(a, b);
}

void write_csv(std::ostream& os, const PointMeasure& m) {
    os << "location,weight\n";
    for (const Atom& a : m.atoms())
        os << format_double(a.location) << ',' << format_double(a.weight) << '\n';
}

void write_csv(std::ostream& os, const BinnedMeasure& m) {
    os << "bin_left,mass\n";
    for (std::size_t i = 0; i < m.bin_count(); ++i)
        os << format_double(m.origin() + static_cast<double>(i) * m.bin_width()) << ','
           << format_double(m.masses()[i]) << '\n';
}

void write_csv(std::ostream& os, const ContinuityReport& r) {
    os << "epsilon,s_value,density_sup\n";
    for (std::size_t i = 0; i < r.epsilons.size(); ++i)
        os << format_double(r.epsilons[i]) << ',' << format_double(r.s_values[i]) << ','
           << format_double(r.density_sup[i]) << '\n';
}

}  // namespace specavg
