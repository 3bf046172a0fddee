#include "specavg/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace specavg {

namespace {

// Accumulates the weighted union of per-node spectral measures, then
// canonicalizes once. Node order does not matter; the canonical atom list is
// the same for any merge order.
PointMeasure weighted_family_average(const OperatorPair& pair, const Vector& phi,
                                     const std::vector<double>& couplings,
                                     const std::vector<double>& node_weights) {
    std::vector<Atom> all;
    all.reserve(couplings.size() * static_cast<std::size_t>(pair.dim()));
    for (std::size_t j = 0; j < couplings.size(); ++j) {
        if (node_weights[j] == 0.0) continue;
        const PointMeasure rho = spectral_measure(pair.at(couplings[j]), phi);
        for (const Atom& a : rho.atoms()) all.push_back({a.location, a.weight * node_weights[j]});
    }
    return PointMeasure(std::move(all));
}

void warn_if_outside_range(const OperatorPair& pair, const Vector& phi, const char* op) {
    const double defect = range_defect(pair.B(), phi);
    if (defect > 1e-10)
        std::cerr << "[specavg] " << op << ": Phi lies outside Range(B), defect = " << defect
                  << " (hypothesis of the averaging theorem violated)\n";
}

}  // namespace

PointMeasure average_spectral_measure(const OperatorPair& pair, const Vector& phi,
                                      const WeightProfile& h, const QuadratureRule& rule) {
    if (phi.size() != pair.dim())
        throw std::invalid_argument("average_spectral_measure: dimension mismatch");
    if (rule.size() == 0) throw std::invalid_argument("average_spectral_measure: empty rule");
    warn_if_outside_range(pair, phi, "average_spectral_measure");
    std::vector<double> w(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j)
        w[j] = rule.weights()[j] * h.value(rule.nodes()[j]);
    return weighted_family_average(pair, phi, rule.nodes(), w);
}

PointMeasure tanh_family_average(const OperatorPair& pair, const Vector& phi,
                                 const WeightProfile& g, const QuadratureRule& rule) {
    if (phi.size() != pair.dim())
        throw std::invalid_argument("tanh_family_average: dimension mismatch");
    if (rule.size() == 0) throw std::invalid_argument("tanh_family_average: empty rule");
    warn_if_outside_range(pair, phi, "tanh_family_average");
    std::vector<double> couplings(rule.size()), w(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j) {
        couplings[j] = std::tanh(rule.nodes()[j]);
        w[j] = rule.weights()[j] * g.value(rule.nodes()[j]);
    }
    return weighted_family_average(pair, phi, couplings, w);
}

ScalarOracle::ScalarOracle(double a, double b, WeightProfile h)
    : a_(a), b_(b), h_(std::move(h)) {
    if (b_ <= 0.0) throw std::invalid_argument("ScalarOracle: b must be positive");
}

double ScalarOracle::density(double s) const { return h_.value((s - a_) / b_) / b_; }

BinnedMeasure ScalarOracle::binned(double bin_width, double lo, double hi) const {
    if (bin_width <= 0.0 || hi <= lo) throw std::invalid_argument("ScalarOracle: bad grid");
    const auto nbins = static_cast<std::size_t>(std::ceil((hi - lo) / bin_width - 1e-9));
    std::vector<double> masses(std::max<std::size_t>(nbins, 1), 0.0);
    for (std::size_t i = 0; i < masses.size(); ++i) {
        const double x0 = lo + static_cast<double>(i) * bin_width;
        const double x1 = x0 + bin_width;
        // exact: the pushforward CDF is h's cumulative at the pulled-back edges
        masses[i] = h_.integral_to((x1 - a_) / b_) - h_.integral_to((x0 - a_) / b_);
    }
    return BinnedMeasure(lo, bin_width, std::move(masses));
}

ChangeOfVariablesReport change_of_variables_check(const OperatorPair& pair, const Vector& phi,
                                                  const WeightProfile& g, int n_nodes,
                                                  double delta, double bin_width) {
    if (delta <= 0.0)
        throw std::invalid_argument("change_of_variables_check: delta must be positive"
                                    " (the substitution is singular at s = +-1)");
    if (phi.size() != pair.dim())
        throw std::invalid_argument("change_of_variables_check: dimension mismatch");

    const QuadratureRule lhs_rule =
        QuadratureRule::composite_gauss(g.support_lo(), g.support_hi(), n_nodes);
    const PointMeasure lhs = tanh_family_average(pair, phi, g, lhs_rule);

    // s-range: truncation at +-(1-delta) intersected with the image of supp g,
    // where the substituted integrand is smooth
    const double s_lo = std::max(-1.0 + delta, std::tanh(g.support_lo()));
    const double s_hi = std::min(1.0 - delta, std::tanh(g.support_hi()));
    ChangeOfVariablesReport rep;
    rep.bin_width = bin_width;
    rep.discarded_mass =
        g.integral() - (g.integral_to(std::atanh(s_hi)) - g.integral_to(std::atanh(s_lo)));

    PointMeasure rhs;
    if (s_hi > s_lo) {
        const QuadratureRule rhs_rule = QuadratureRule::composite_gauss(s_lo, s_hi, n_nodes);
        std::vector<double> w(rhs_rule.size());
        for (std::size_t j = 0; j < rhs_rule.size(); ++j) {
            const double s = rhs_rule.nodes()[j];
            w[j] = rhs_rule.weights()[j] * g.value(std::atanh(s)) / (1.0 - s * s);
        }
        rhs = PointMeasure([&] {
            std::vector<Atom> all;
            all.reserve(rhs_rule.size() * static_cast<std::size_t>(pair.dim()));
            for (std::size_t j = 0; j < rhs_rule.size(); ++j) {
                if (w[j] == 0.0) continue;
                const PointMeasure rho = spectral_measure(pair.at(rhs_rule.nodes()[j]), phi);
                for (const Atom& a : rho.atoms()) all.push_back({a.location, a.weight * w[j]});
            }
            return all;
        }());
    }

    rep.lhs_mass = lhs.total_mass();
    rep.rhs_mass = rhs.total_mass();
    if (lhs.empty() && rhs.empty()) return rep;

    double lo = 1e300, hi = -1e300;
    for (const PointMeasure* m : std::initializer_list<const PointMeasure*>{&lhs, &rhs})
        if (!m->empty()) {
            lo = std::min(lo, m->atoms().front().location);
            hi = std::max(hi, m->atoms().back().location);
        }
    lo -= 2.0 * bin_width;
    hi += 2.0 * bin_width;
    rep.tv_distance = tv_distance(bin_measure_linear(lhs, bin_width, lo, hi),
                                  bin_measure_linear(rhs, bin_width, lo, hi));
    return rep;
}

SmoothingContrast smoothing_contrast(const OperatorPair& pair, const Vector& phi,
                                     const WeightProfile& h, const QuadratureRule& rule,
                                     const std::vector<double>& epsilons) {
    SmoothingContrast out;
    const PointMeasure nu = average_spectral_measure(pair, phi, h, rule);
    out.averaged = continuity_ladder(nu, epsilons);

    const double t0 = 0.5 * (h.support_lo() + h.support_hi());
    const PointMeasure single = spectral_measure(pair.at(t0), phi);
    out.single_t = continuity_ladder(single, epsilons);
    out.max_atom_weight_single = single.max_atom_weight();

    // empirical constant in s(nu,eps) <= C s(mu,eps) with mu = h dt, for
    // which s(mu,eps) ~ eps * sup h on the support
    double sup_h = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j)
        sup_h = std::max(sup_h, h.value(rule.nodes()[j]));
    if (sup_h > 0.0)
        for (std::size_t i = 0; i < epsilons.size(); ++i)
            out.empirical_ratio =
                std::max(out.empirical_ratio,
                         out.averaged.s_values[i] / (epsilons[i] * sup_h));
    return out;
}

}  // namespace specavg
