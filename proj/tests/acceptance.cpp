// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. argv[1] names the CLI binary (used by the reproducibility check).
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "specavg/averaging.hpp"
#include "specavg/commutator.hpp"
#include "specavg/random_model.hpp"

using namespace specavg;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& what) {
    std::printf("criterion %2d %s  %s\n", id, pass ? "PASS" : "FAIL", what.c_str());
    if (!pass) ++g_failures;
}

double u01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
double gauss(std::mt19937_64& g) {
    const double u1 = std::max(u01(g), 1e-300);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u01(g));
}

Matrix random_hermitian(std::mt19937_64& g, int n) {
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(gauss(g), gauss(g));
    return 0.5 * (a + a.adjoint().eval());
}

Matrix random_psd(std::mt19937_64& g, int n, int rank) {
    Matrix v(n, rank);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < rank; ++j) v(i, j) = Complex(gauss(g), gauss(g));
    return (v * v.adjoint()) / rank;
}

Vector random_vector(std::mt19937_64& g, int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = Complex(gauss(g), gauss(g));
    return v;
}

// 1. Parseval/mass on 100 random (H, Phi) with n <= 200.
void criterion_1() {
    std::mt19937_64 g(101);
    bool ok = true;
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 2 + static_cast<int>(u01(g) * 199.0);
        const HermitianOperator h(random_hermitian(g, n));
        const Vector phi = random_vector(g, n);
        const double mass = spectral_measure(h, phi).total_mass();
        ok = ok && std::abs(mass - phi.squaredNorm()) <= 1e-10 * phi.squaredNorm();
    }
    report(1, ok, "Parseval: |total_mass - ||Phi||^2| <= 1e-10 ||Phi||^2, 100 draws, n <= 200");
}

OperatorPair scalar_pair(double a, double b) {
    Matrix ma(1, 1), mb(1, 1);
    ma(0, 0) = a;
    mb(0, 0) = b;
    return OperatorPair(HermitianOperator(ma), HermitianOperator(mb));
}

// 2. Exact scalar oracle at 2000 Gauss nodes, 1e-3 bins.
void criterion_2() {
    const WeightProfile h = WeightProfile::uniform(0.0, 1.0);
    const QuadratureRule rule = QuadratureRule::for_profile(h, 2000);
    Vector one(1);
    one(0) = 1.0;
    const PointMeasure nu = average_spectral_measure(scalar_pair(0.0, 1.0), one, h, rule);
    const double l1 = l1_distance(bin_measure(nu, 1e-3, -0.5, 1.5),
                                  ScalarOracle(0.0, 1.0, h).binned(1e-3, -0.5, 1.5));
    report(2, l1 <= 1e-3, "scalar oracle: L1(binned average, exact density) <= 1e-3, got " +
                              format_double(l1));
}

// 3. Change of variables, scalar and n=4, 4000 nodes, delta 1e-6.
void criterion_3() {
    const WeightProfile g = WeightProfile::truncated_gaussian(0.0, 1.0, -3.0, 3.0);
    Vector one(1);
    one(0) = 1.0;
    const double tv_scalar =
        change_of_variables_check(scalar_pair(0.0, 1.0), one, g, 4000, 1e-6).tv_distance;

    std::mt19937_64 rng(103);
    const OperatorPair pair(HermitianOperator(random_hermitian(rng, 4) / 2.0),
                            HermitianOperator(random_psd(rng, 4, 4)));
    Vector phi = pair.B().matrix() * random_vector(rng, 4);
    phi.normalize();
    const double tv_n4 = change_of_variables_check(pair, phi, g, 4000, 1e-6).tv_distance;

    report(3, tv_scalar <= 1e-3 && tv_n4 <= 1e-3,
           "change of variables: TV <= 1e-3 (scalar " + format_double(tv_scalar) + ", n=4 " +
               format_double(tv_n4) + ")");
}

// 4. Direct-integral identity, n=6, J=10, 20 random intervals.
void criterion_4() {
    std::mt19937_64 g(104);
    FiberFamily family;
    for (int j = 0; j < 10; ++j) {
        family.fibers.push_back(HermitianOperator(random_hermitian(g, 6)));
        family.weights.push_back(u01(g));
    }
    const Vector f = random_vector(g, 6);
    double wsum = 0.0;
    for (double w : family.weights) wsum += w * w;
    const double scale = f.squaredNorm() * wsum;
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const double a = 10.0 * (u01(g) - 0.5), b = a + 8.0 * u01(g);
        worst = std::max(worst, decomposition_identity_check(family, f, a, b));
    }
    report(4, worst <= 1e-12 * scale,
           "direct-integral identity: max discrepancy " + format_double(worst) +
               " <= 1e-12 * scale over 20 intervals");
}

// 5. Kronecker commutator identity, n=4, N=16.
void criterion_5() {
    std::mt19937_64 g(105);
    const OperatorPair pair(HermitianOperator(random_hermitian(g, 4)),
                            HermitianOperator(random_psd(g, 4, 4)));
    const KatoPutnamReport r = kato_putnam_identity(pair, build_grid(16, 8.0));
    report(5, r.discrepancy <= 1e-10 * r.norm_b * r.norm_c,
           "Kronecker identity: Frobenius discrepancy " + format_double(r.discrepancy) +
               " <= 1e-10 ||B|| ||C||");
}

// 6. Positivity of the discrete positive commutator and its refinement.
void criterion_6() {
    auto spectrum = [](int n, double l) {
        const EigenDecomposition e = eigh(howland_commutator(build_grid(n, l)));
        return std::vector<double>(e.eigenvalues.data(), e.eigenvalues.data() + n);
    };
    const std::vector<double> fine = spectrum(256, 20.0);
    const double nrm = std::max(std::abs(fine.front()), std::abs(fine.back()));
    const bool psd = fine.front() >= -1e-8 * nrm;
    const auto positive =
        std::count_if(fine.begin(), fine.end(), [](double v) { return v > 0.0; });
    const bool mostly = positive >= static_cast<long>(0.9 * 256);

    const double inf_coarse = positive_part_infimum(spectrum(64, 10.0));
    const double inf_fine = positive_part_infimum(fine);
    const double rel_change = std::abs(inf_fine - inf_coarse) / inf_coarse;
    const bool stable = rel_change <= 0.10;

    report(6, psd && mostly && stable,
           "positive commutator: min eig >= -1e-8||C||, " + std::to_string(positive) +
               "/256 strictly positive, refinement change " + format_double(rel_change));
}

// 7. Smoothing contrast on the desk instance, plus the negative control.
void criterion_7() {
    std::mt19937_64 g(107);
    const int n = 40;
    const Matrix a = random_hermitian(g, n);
    const Matrix b = random_psd(g, n, 3);
    const OperatorPair pair{HermitianOperator(a), HermitianOperator(b)};
    Vector phi = b * random_vector(g, n);
    phi.normalize();

    const WeightProfile h = WeightProfile::uniform(-1.0, 1.0, 0.5);
    const QuadratureRule rule = QuadratureRule::for_profile(h, 4000);
    const std::vector<double> ladder = {0.05, 0.02, 0.01, 0.005};
    const SmoothingContrast sc = smoothing_contrast(pair, phi, h, rule, ladder);

    const auto [mn, mx] =
        std::minmax_element(sc.averaged.density_sup.begin(), sc.averaged.density_sup.end());
    const bool bounded = *mx <= 4.0 * *mn;
    bool atom_bound = true;
    for (double s : sc.single_t.s_values)
        atom_bound = atom_bound && s >= sc.max_atom_weight_single * (1.0 - 1e-12);

    // negative control: an eigenvector of a block-diagonal A annihilated by B
    Matrix a2 = Matrix::Zero(n, n);
    a2.topLeftCorner(n - 1, n - 1) = random_hermitian(g, n - 1);
    a2(n - 1, n - 1) = 3.5;
    Matrix b2 = Matrix::Zero(n, n);
    b2.topLeftCorner(n - 1, n - 1) = random_psd(g, n - 1, 3);
    Vector bad = Vector::Zero(n);
    bad(n - 1) = 1.0;
    const PointMeasure stuck = average_spectral_measure(
        OperatorPair(HermitianOperator(a2), HermitianOperator(b2)), bad, h, rule);
    bool persistent = true;
    for (double eps : ladder)
        persistent = persistent && stuck.modulus_of_continuity(eps) >= 1.0 - 1e-10;

    report(7, bounded && atom_bound && persistent,
           "smoothing contrast: ladder ratio " + format_double(*mx / *mn) +
               " <= 4, single-t atom bound, persistent atom under violated hypothesis");
}

// 8. IDS oracles: full enumeration vs brute force, circulant free spectrum.
void criterion_8() {
    RandomModel model;
    model.cells = 2;
    model.mesh = 4;
    model.site_profile.assign(4, 1.0);
    model.coupling_law = WeightProfile::discrete({0.25, 1.0}, {0.5, 0.5});
    model.validate();

    const IDSEstimate exact = ids_enumerate(model, 96);
    std::vector<std::pair<PointMeasure, double>> parts;
    for (double w0 : {0.25, 1.0})
        for (double w1 : {0.25, 1.0})
            parts.push_back(
                {local_trace_measure(build_hamiltonian(model, {w0, w1}), model), 0.25});
    const BinnedMeasure brute =
        bin_measure(merge(parts), exact.bin_width, exact.origin,
                    exact.origin + exact.bin_width * exact.masses.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < exact.masses.size(); ++i)
        worst = std::max(worst, std::abs(exact.masses[i] - brute.masses()[i]));

    // zero-disorder spectrum vs the circulant formula
    const int nn = model.dim();
    const EigenDecomposition free_ed =
        eigh(build_hamiltonian(model, std::vector<double>(2, 0.0)));
    std::vector<double> circulant;
    for (int k = 0; k < nn; ++k)
        circulant.push_back((2.0 - 2.0 * std::cos(2.0 * M_PI * k / nn)) * 16.0);
    std::sort(circulant.begin(), circulant.end());
    double spec_err = 0.0;
    for (int i = 0; i < nn; ++i)
        spec_err = std::max(spec_err, std::abs(free_ed.eigenvalues[i] - circulant[i]));

    report(8, worst <= 1e-10 && spec_err <= 1e-10,
           "IDS oracle: enumeration error " + format_double(worst) +
               ", circulant spectrum error " + format_double(spec_err) + ", both <= 1e-10");
}

// 9. Wegner-style regularity ladder, disordered arm and zero-disorder control.
void criterion_9() {
    RandomModel model;
    model.cells = 50;
    model.mesh = 4;
    model.site_profile.assign(4, 1.0);
    model.coupling_law = WeightProfile::uniform(0.0, 1.0);
    model.validate();
    const std::vector<double> ladder = {0.2, 0.1, 0.05};

    const IDSEstimate est = ids_estimate(model, 100, 5200, 109);  // ~0.0125 bins
    const ContinuityReport disordered = wegner_report(est, ladder);
    const auto [dmn, dmx] = std::minmax_element(disordered.density_sup.begin(),
                                                disordered.density_sup.end());
    const bool stable = *dmx <= 2.0 * *dmn;

    RandomModel frozen = model;
    frozen.coupling_law = WeightProfile::discrete({0.0}, {1.0});
    const ContinuityReport control =
        wegner_report(ids_estimate(frozen, 1, 5200, 109), ladder);
    const auto [cmn, cmx] =
        std::minmax_element(control.density_sup.begin(), control.density_sup.end());
    const bool control_fails = *cmx > 2.0 * *cmn;

    report(9, stable && control_fails,
           "Wegner ladder: disordered ratio " + format_double(*dmx / *dmn) +
               " <= 2; zero-disorder control ratio " + format_double(*cmx / *cmn) +
               " exceeds 2");
}

// 10. Cyclicity rank reproduces its three reference cases.
void criterion_10() {
    Matrix a = Matrix::Zero(3, 3);
    a.diagonal() << 1.0, 2.0, 3.0;
    Vector v(3);
    v << 1.0, 1.0, 1.0;
    v /= std::sqrt(3.0);
    const bool full =
        cyclicity_rank(OperatorPair(HermitianOperator(a),
                                    HermitianOperator(v * v.adjoint()))) == 3;

    Matrix b = Matrix::Zero(2, 2);
    b(0, 0) = 1.0;
    const bool degenerate =
        cyclicity_rank(OperatorPair(HermitianOperator(Matrix::Identity(2, 2)),
                                    HermitianOperator(b))) == 1;

    RandomModel model;
    model.cells = 3;
    model.mesh = 4;
    model.site_profile.assign(4, 1.0);
    model.coupling_law = WeightProfile::uniform(0.0, 1.0);
    std::vector<double> rest = sample_couplings(model, 110, 0);
    rest.resize(static_cast<std::size_t>(model.cells - 1));
    const OperatorPair site = single_site_pair(model, rest);
    const bool disordered = cyclicity_rank(site) == model.dim();

    report(10, full && degenerate && disordered,
           "cyclicity rank: distinct+rank-one full, degenerate rank 1, disordered sample full");
}

// 11. Byte-identical reruns of CLI configs.
void criterion_11(const char* cli) {
    const fs::path tmp = fs::temp_directory_path() / "specavg_acceptance";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    const std::string ids_cfg =
        "experiment = ids\nmodel.cells = 6\nmodel.mesh = 4\n"
        "model.law.kind = uniform\nmodel.law.a = 0\nmodel.law.b = 1\n"
        "samples = 12\nbins = 128\nseed = 111\n";
    const std::string avg_cfg =
        "experiment = average\npair.kind = random\npair.n = 6\npair.b_rank = 3\n"
        "seed = 112\nprofile.kind = uniform\nprofile.a = 0\nprofile.b = 1\n"
        "bin_width = 0.01\n";

    bool ok = true;
    int idx = 0;
    for (const std::string& cfg_text : {ids_cfg, avg_cfg}) {
        const fs::path cfg = tmp / ("config" + std::to_string(idx) + ".cfg");
        std::ofstream(cfg, std::ios::binary) << cfg_text;
        std::string first;
        for (int run = 0; run < 2; ++run) {
            const fs::path out = tmp / ("out" + std::to_string(idx) + "_" + std::to_string(run));
            const std::string cmd = std::string(cli) + " run " + cfg.string() + " --out " +
                                    out.string() + " >/dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0) {
                ok = false;
                break;
            }
            std::string all;
            for (const auto& e : fs::directory_iterator(out)) {
                if (e.path().extension() != ".csv") continue;
                std::ifstream is(e.path(), std::ios::binary);
                std::ostringstream os;
                os << e.path().filename().string() << '\n' << is.rdbuf();
                all += os.str();
            }
            if (run == 0)
                first = all;
            else
                ok = ok && !all.empty() && all == first;
        }
        ++idx;
    }
    report(11, ok, "reproducibility: reruns emit byte-identical CSV artifacts");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-cli>\n";
        return 2;
    }
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11(argv[1]);
    if (g_failures > 0) {
        std::printf("%d criterion/criteria failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
