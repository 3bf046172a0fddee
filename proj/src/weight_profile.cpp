#include "specavg/weight_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace specavg {

namespace {

double gauss_cdf(double mu, double sigma, double x) {
    return 0.5 * std::erfc(-(x - mu) / (sigma * std::numbers::sqrt2));
}

}  // namespace

WeightProfile WeightProfile::uniform(double a, double b, double height) {
    if (!(b > a) || height < 0.0) throw std::invalid_argument("uniform profile: bad parameters");
    WeightProfile p;
    p.kind_ = Kind::Uniform;
    p.lo_ = a;
    p.hi_ = b;
    p.p1_ = height;
    return p;
}

WeightProfile WeightProfile::triangular(double a, double b) {
    if (!(b > a)) throw std::invalid_argument("triangular profile: bad support");
    WeightProfile p;
    p.kind_ = Kind::Triangular;
    p.lo_ = a;
    p.hi_ = b;
    return p;
}

WeightProfile WeightProfile::truncated_gaussian(double mu, double sigma, double a, double b) {
    if (!(b > a) || sigma <= 0.0)
        throw std::invalid_argument("truncated gaussian profile: bad parameters");
    WeightProfile p;
    p.kind_ = Kind::TruncatedGaussian;
    p.lo_ = a;
    p.hi_ = b;
    p.p0_ = mu;
    p.p1_ = sigma;
    return p;
}

WeightProfile WeightProfile::table(std::vector<double> knots, std::vector<double> values) {
    if (knots.size() != values.size() || knots.empty())
        throw std::invalid_argument("table profile: knots and values must match and be nonempty");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (knots[i] <= knots[i - 1])
            throw std::invalid_argument("table profile: knots must be strictly increasing");
    for (double v : values)
        if (v < 0.0) throw std::invalid_argument("table profile: negative value");
    if (knots.size() == 1) return discrete({knots[0]}, {std::max(values[0], 1.0)});
    WeightProfile p;
    p.kind_ = Kind::Table;
    p.lo_ = knots.front();
    p.hi_ = knots.back();
    p.knots_ = std::move(knots);
    p.values_ = std::move(values);
    if (p.integral() <= 0.0) throw std::invalid_argument("table profile: zero total weight");
    return p;
}

WeightProfile WeightProfile::discrete(std::vector<double> points, std::vector<double> probs) {
    if (points.size() != probs.size() || points.empty())
        throw std::invalid_argument("discrete law: points and probs must match and be nonempty");
    double s = 0.0;
    for (double w : probs) {
        if (w < 0.0) throw std::invalid_argument("discrete law: negative probability");
        s += w;
    }
    if (s <= 0.0) throw std::invalid_argument("discrete law: zero total probability");
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
    WeightProfile p;
    p.kind_ = Kind::Discrete;
    for (std::size_t i : order) {
        p.knots_.push_back(points[i]);
        p.values_.push_back(probs[i]);
    }
    p.lo_ = p.knots_.front();
    p.hi_ = p.knots_.back();
    return p;
}

double WeightProfile::value(double t) const {
    if (t < lo_ || t > hi_) return 0.0;
    switch (kind_) {
        case Kind::Uniform:
            return p1_;
        case Kind::Triangular: {
            const double mid = 0.5 * (lo_ + hi_);
            const double half = 0.5 * (hi_ - lo_);
            return std::max(0.0, (1.0 - std::abs(t - mid) / half) * 2.0 / (hi_ - lo_));
        }
        case Kind::TruncatedGaussian: {
            const double z = (t - p0_) / p1_;
            return std::exp(-0.5 * z * z) / (p1_ * std::sqrt(2.0 * std::numbers::pi));
        }
        case Kind::Table: {
            auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
            if (it == knots_.begin()) return values_.front();
            if (it == knots_.end()) return values_.back();
            const std::size_t j = static_cast<std::size_t>(it - knots_.begin());
            const double w = (t - knots_[j - 1]) / (knots_[j] - knots_[j - 1]);
            return values_[j - 1] * (1.0 - w) + values_[j] * w;
        }
        case Kind::Discrete:
            throw std::logic_error("discrete law has no density value");
    }
    return 0.0;
}

double WeightProfile::integral() const {
    switch (kind_) {
        case Kind::Uniform:
            return p1_ * (hi_ - lo_);
        case Kind::Triangular:
            return 1.0;
        case Kind::TruncatedGaussian:
            return gauss_cdf(p0_, p1_, hi_) - gauss_cdf(p0_, p1_, lo_);
        case Kind::Table: {
            double s = 0.0;
            for (std::size_t i = 1; i < knots_.size(); ++i)
                s += 0.5 * (values_[i] + values_[i - 1]) * (knots_[i] - knots_[i - 1]);
            return s;
        }
        case Kind::Discrete: {
            double s = 0.0;
            for (double w : values_) s += w;
            return s;
        }
    }
    return 0.0;
}

double WeightProfile::integral_to(double t) const {
    if (t <= lo_) return 0.0;
    if (t >= hi_) return integral();
    switch (kind_) {
        case Kind::Uniform:
            return p1_ * (t - lo_);
        case Kind::Triangular: {
            const double mid = 0.5 * (lo_ + hi_);
            const double half = 0.5 * (hi_ - lo_);
            if (t <= mid) {
                const double u = (t - lo_) / half;
                return 0.5 * u * u;
            }
            const double u = (hi_ - t) / half;
            return 1.0 - 0.5 * u * u;
        }
        case Kind::TruncatedGaussian:
            return gauss_cdf(p0_, p1_, t) - gauss_cdf(p0_, p1_, lo_);
        case Kind::Table: {
            double s = 0.0;
            for (std::size_t i = 1; i < knots_.size(); ++i) {
                if (knots_[i] <= t) {
                    s += 0.5 * (values_[i] + values_[i - 1]) * (knots_[i] - knots_[i - 1]);
                } else {
                    const double dt = t - knots_[i - 1];
                    const double vt = value(t);
                    s += 0.5 * (values_[i - 1] + vt) * dt;
                    break;
                }
            }
            return s;
        }
        case Kind::Discrete: {
            double s = 0.0;
            for (std::size_t i = 0; i < knots_.size(); ++i)
                if (knots_[i] <= t) s += values_[i];
            return s;
        }
    }
    return 0.0;
}

double WeightProfile::inverse_cdf(double u) const {
    const double total = integral();
    if (total <= 0.0) throw std::logic_error("inverse_cdf: non-normalizable law");
    const double target = std::clamp(u, 0.0, 1.0) * total;
    if (kind_ == Kind::Discrete) {
        double s = 0.0;
        for (std::size_t i = 0; i < knots_.size(); ++i) {
            s += values_[i];
            if (target < s || i + 1 == knots_.size()) return knots_[i];
        }
        return knots_.back();
    }
    // bisection on the cumulative integral; all densities are bounded and
    // piecewise smooth, 80 iterations reach full double resolution
    double a = lo_, b = hi_;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (a + b);
        if (integral_to(mid) < target)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

std::string WeightProfile::describe() const {
    switch (kind_) {
        case Kind::Uniform:
            return "uniform[" + std::to_string(lo_) + "," + std::to_string(hi_) + "]";
        case Kind::Triangular:
            return "triangular[" + std::to_string(lo_) + "," + std::to_string(hi_) + "]";
        case Kind::TruncatedGaussian:
            return "truncated-gaussian(mu=" + std::to_string(p0_) +
                   ",sigma=" + std::to_string(p1_) + ")";
        case Kind::Table:
            return "table(" + std::to_string(knots_.size()) + " knots)";
        case Kind::Discrete:
            return "discrete(" + std::to_string(knots_.size()) + " points)";
    }
    return "?";
}

void gauss_legendre(int q, std::vector<double>& nodes, std::vector<double>& weights) {
    if (q < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    nodes.assign(static_cast<std::size_t>(q), 0.0);
    weights.assign(static_cast<std::size_t>(q), 0.0);
    for (int i = 0; i < (q + 1) / 2; ++i) {
        // Newton iteration from the Chebyshev estimate
        double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < q; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = q * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(q - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(q - 1 - i)] = w;
    }
}

QuadratureRule QuadratureRule::composite_gauss(double a, double b, int n_nodes,
                                               int nodes_per_panel) {
    if (!(b > a)) throw std::invalid_argument("quadrature: empty interval");
    if (n_nodes < 1 || nodes_per_panel < 1 || n_nodes < nodes_per_panel)
        throw std::invalid_argument("quadrature: bad node counts");
    const int panels = n_nodes / nodes_per_panel;
    std::vector<double> gx, gw;
    gauss_legendre(nodes_per_panel, gx, gw);
    QuadratureRule rule;
    rule.nodes_.reserve(static_cast<std::size_t>(panels * nodes_per_panel));
    rule.weights_.reserve(rule.nodes_.capacity());
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double mid = lo + 0.5 * width;
        for (int j = 0; j < nodes_per_panel; ++j) {
            rule.nodes_.push_back(mid + 0.5 * width * gx[static_cast<std::size_t>(j)]);
            rule.weights_.push_back(0.5 * width * gw[static_cast<std::size_t>(j)]);
        }
    }
    return rule;
}

QuadratureRule QuadratureRule::for_profile(const WeightProfile& h, int n_nodes,
                                           int nodes_per_panel) {
    if (h.is_discrete())
        throw std::invalid_argument("quadrature: discrete laws cannot be quadratured");
    QuadratureRule rule =
        composite_gauss(h.support_lo(), h.support_hi(), n_nodes, nodes_per_panel);
    double s = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) s += rule.weights_[j] * h.value(rule.nodes_[j]);
    const double exact = h.integral();
    const double tol = (h.kind() == WeightProfile::Kind::Table) ? 1e-3 : 1e-6;
    if (std::abs(s - exact) > tol * std::max(exact, 1e-300))
        throw std::runtime_error("quadrature: rule fails the profile integral check");
    return rule;
}

}  // namespace specavg
