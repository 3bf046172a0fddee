#include "specavg/random_model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace specavg {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

struct SampleStats {
    std::vector<Eigen::VectorXd> eigenvalues;
    std::vector<Eigen::VectorXd> trace_weights;
    double min_e = 1e300, max_e = -1e300;
};

SampleStats collect(const RandomModel& model, const std::vector<std::vector<double>>& omegas) {
    SampleStats st;
    const int m = model.mesh;
    for (const auto& om : omegas) {
        const EigenDecomposition ed = eigh(build_hamiltonian(model, om));
        Eigen::VectorXd w(ed.eigenvalues.size());
        for (Eigen::Index i = 0; i < ed.eigenvalues.size(); ++i)
            w[i] = ed.eigenvectors.col(i).head(m).squaredNorm();
        st.min_e = std::min(st.min_e, ed.eigenvalues.minCoeff());
        st.max_e = std::max(st.max_e, ed.eigenvalues.maxCoeff());
        st.eigenvalues.push_back(ed.eigenvalues);
        st.trace_weights.push_back(std::move(w));
    }
    return st;
}

IDSEstimate accumulate(const SampleStats& st, const std::vector<double>& probs, int bins) {
    IDSEstimate est;
    est.samples = st.eigenvalues.size();
    est.origin = st.min_e - 0.1;
    est.bin_width = (st.max_e + 0.1 - est.origin) / bins;
    est.masses.assign(static_cast<std::size_t>(bins), 0.0);

    std::vector<std::vector<double>> per_sample(st.eigenvalues.size());
    for (std::size_t s = 0; s < st.eigenvalues.size(); ++s) {
        std::vector<double> binned(static_cast<std::size_t>(bins), 0.0);
        for (Eigen::Index i = 0; i < st.eigenvalues[s].size(); ++i) {
            auto idx = static_cast<long>((st.eigenvalues[s][i] - est.origin) / est.bin_width);
            idx = std::clamp(idx, 0L, static_cast<long>(bins) - 1L);
            binned[static_cast<std::size_t>(idx)] += st.trace_weights[s][i];
        }
        const double p = probs[s];
        for (int b = 0; b < bins; ++b)
            est.masses[static_cast<std::size_t>(b)] += p * binned[static_cast<std::size_t>(b)];
        per_sample[s] = std::move(binned);
    }
    est.std_error.assign(static_cast<std::size_t>(bins), 0.0);
    const auto s_count = static_cast<double>(est.samples);
    if (est.samples > 1 && probs[0] == probs[1]) {
        // equal-weight Monte Carlo: two-pass sample variance avoids the
        // E[x^2] - E[x]^2 cancellation that turns zero variance into 1e-9
        for (int b = 0; b < bins; ++b) {
            const auto i = static_cast<std::size_t>(b);
            double ss = 0.0;
            for (const auto& binned : per_sample) {
                const double d = binned[i] - est.masses[i];
                ss += d * d;
            }
            est.std_error[i] = std::sqrt(ss / (s_count * (s_count - 1.0)));
        }
    }
    return est;
}

}  // namespace

void RandomModel::validate() const {
    if (cells < 1 || mesh < 1) throw std::invalid_argument("RandomModel: bad lattice sizes");
    if (site_profile.size() != static_cast<std::size_t>(mesh))
        throw std::invalid_argument("RandomModel: site profile must have one value per mesh point");
    bool positive = false;
    for (double v : site_profile) {
        if (v < 0.0 || !std::isfinite(v))
            throw std::invalid_argument("RandomModel: site profile must be nonnegative and bounded");
        if (v > 0.0) positive = true;
    }
    if (!positive && site_profile.size() > 0) {
        // u == 0 is allowed (trivial model), callers decide what to do with it
    }
    if (background && background->size() != static_cast<std::size_t>(mesh))
        throw std::invalid_argument("RandomModel: background must have one value per mesh point");
}

HermitianOperator build_hamiltonian(const RandomModel& model,
                                    const std::vector<double>& omega) {
    model.validate();
    if (omega.size() != static_cast<std::size_t>(model.cells))
        throw std::invalid_argument("build_hamiltonian: need one coupling per cell");
    const int n = model.dim();
    const double ms = static_cast<double>(model.mesh);
    const double hop = ms * ms;  // 1/dx^2 with dx = 1/m
    Matrix h = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const int cell = i / model.mesh;
        const int off = i % model.mesh;
        double diag = 2.0 * hop + omega[static_cast<std::size_t>(cell)] *
                                      model.site_profile[static_cast<std::size_t>(off)];
        if (model.background) diag += (*model.background)[static_cast<std::size_t>(off)];
        h(i, i) = diag;
        h(i, (i + 1) % n) = -hop;
        h((i + 1) % n, i) = -hop;
    }
    return HermitianOperator(std::move(h));
}

double uniform01(std::uint64_t seed, std::uint64_t sample_index, std::uint64_t site) {
    std::uint64_t z = mix(mix(mix(seed) ^ sample_index) ^ site);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

std::vector<double> sample_couplings(const RandomModel& model, std::uint64_t seed,
                                     std::uint64_t sample_index) {
    if (model.coupling_law.integral() <= 0.0)
        throw std::invalid_argument("sample_couplings: non-normalizable law");
    std::vector<double> omega(static_cast<std::size_t>(model.cells));
    for (int c = 0; c < model.cells; ++c)
        omega[static_cast<std::size_t>(c)] =
            model.coupling_law.inverse_cdf(uniform01(seed, sample_index,
                                                     static_cast<std::uint64_t>(c)));
    return omega;
}

PointMeasure local_trace_measure(const EigenDecomposition& ed, const RandomModel& model) {
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(ed.eigenvalues.size()));
    for (Eigen::Index i = 0; i < ed.eigenvalues.size(); ++i)
        atoms.push_back({ed.eigenvalues[i], ed.eigenvectors.col(i).head(model.mesh).squaredNorm()});
    return PointMeasure(std::move(atoms));
}

PointMeasure local_trace_measure(const HermitianOperator& h, const RandomModel& model) {
    return local_trace_measure(eigh(h), model);
}

IDSEstimate ids_estimate(const RandomModel& model, int samples, int bins, std::uint64_t seed) {
    if (samples < 1 || bins < 1) throw std::invalid_argument("ids_estimate: bad sizes");
    std::vector<std::vector<double>> omegas;
    omegas.reserve(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s)
        omegas.push_back(sample_couplings(model, seed, static_cast<std::uint64_t>(s)));
    const SampleStats st = collect(model, omegas);
    const std::vector<double> probs(static_cast<std::size_t>(samples),
                                    1.0 / static_cast<double>(samples));
    return accumulate(st, probs, bins);
}

IDSEstimate ids_enumerate(const RandomModel& model, int bins) {
    if (!model.coupling_law.is_discrete())
        throw std::invalid_argument("ids_enumerate: requires a discrete coupling law");
    const auto& pts = model.coupling_law.points();
    const auto& wts = model.coupling_law.weights();
    const double total = model.coupling_law.integral();
    const std::size_t k = pts.size();
    std::size_t count = 1;
    for (int c = 0; c < model.cells; ++c) {
        count *= k;
        if (count > 1000000) throw std::invalid_argument("ids_enumerate: outcome set too large");
    }
    std::vector<std::vector<double>> omegas;
    std::vector<double> probs;
    omegas.reserve(count);
    probs.reserve(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        std::vector<double> om(static_cast<std::size_t>(model.cells));
        double p = 1.0;
        std::size_t rest = idx;
        for (int c = 0; c < model.cells; ++c) {
            const std::size_t choice = rest % k;
            rest /= k;
            om[static_cast<std::size_t>(c)] = pts[choice];
            p *= wts[choice] / total;
        }
        omegas.push_back(std::move(om));
        probs.push_back(p);
    }
    const SampleStats st = collect(model, omegas);
    return accumulate(st, probs, bins);
}

OperatorPair single_site_pair(const RandomModel& model,
                              const std::vector<double>& omega_rest) {
    if (omega_rest.size() != static_cast<std::size_t>(model.cells) - 1)
        throw std::invalid_argument("single_site_pair: need couplings for all cells but cell 0");
    std::vector<double> omega(static_cast<std::size_t>(model.cells), 0.0);
    for (std::size_t c = 1; c < omega.size(); ++c) omega[c] = omega_rest[c - 1];
    HermitianOperator a = build_hamiltonian(model, omega);
    Matrix b = Matrix::Zero(model.dim(), model.dim());
    for (int j = 0; j < model.mesh; ++j)
        b(j, j) = model.site_profile[static_cast<std::size_t>(j)];
    return OperatorPair(std::move(a), HermitianOperator(std::move(b)));
}

PointMeasure single_site_average(const RandomModel& model,
                                 const std::vector<double>& omega_rest, const Vector& phi,
                                 const QuadratureRule& rule) {
    return average_spectral_measure(single_site_pair(model, omega_rest), phi,
                                    model.coupling_law, rule);
}

ContinuityReport wegner_report(const IDSEstimate& est, const std::vector<double>& epsilons) {
    return continuity_ladder(est.binned(), epsilons);
}

std::vector<double> IDSEstimate::cumulative() const {
    std::vector<double> c(masses.size());
    double run = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        run += masses[i];
        c[i] = run;
    }
    return c;
}

void write_csv_ids(std::ostream& os, const IDSEstimate& est) {
    os << "bin_left,mass,std_err,cumulative\n";
    const std::vector<double> cum = est.cumulative();
    for (std::size_t i = 0; i < est.masses.size(); ++i)
        os << format_double(est.origin + static_cast<double>(i) * est.bin_width) << ','
           << format_double(est.masses[i]) << ',' << format_double(est.std_error[i]) << ','
           << format_double(cum[i]) << '\n';
}

}  // namespace specavg
