#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "specavg/averaging.hpp"
#include "specavg/measure.hpp"
#include "specavg/spectral.hpp"
#include "specavg/weight_profile.hpp"

namespace specavg {

// 1D discretized continuum random Schroedinger operator
//   H = -Laplace + sum_c omega_c u(. - c)  (+ optional periodic V0)
// on M unit cells with m mesh points per cell (spacing 1/m), periodic
// boundary. u is sampled on one cell's mesh, nonnegative and bounded.
struct RandomModel {
    int cells = 1;                    // M
    int mesh = 4;                     // m, points per unit cell
    std::vector<double> site_profile; // u on one cell's mesh, size m
    WeightProfile coupling_law = WeightProfile::uniform(0.0, 1.0);
    std::optional<std::vector<double>> background;  // V0 on one cell, size m

    int dim() const { return cells * mesh; }
    void validate() const;
};

// Second-order periodic finite-difference Laplacian plus the coupled
// single-site potentials; real symmetric, monotone in each omega_c.
HermitianOperator build_hamiltonian(const RandomModel& model,
                                    const std::vector<double>& omega);

// i.i.d. couplings via inverse-CDF of the (internally normalized) law;
// a pure function of (seed, sample_index, site).
std::vector<double> sample_couplings(const RandomModel& model, std::uint64_t seed,
                                     std::uint64_t sample_index);

// Counter-based uniform in [0,1), portable across platforms.
double uniform01(std::uint64_t seed, std::uint64_t sample_index, std::uint64_t site);

// Per-sample measure I -> Tr(chi_0 E_H(I) chi_0) with chi_0 the coordinate
// projection onto the first cell's mesh points; total mass = m.
PointMeasure local_trace_measure(const HermitianOperator& h, const RandomModel& model);
PointMeasure local_trace_measure(const EigenDecomposition& ed, const RandomModel& model);

struct IDSEstimate {
    double origin = 0.0;
    double bin_width = 0.0;
    std::vector<double> masses;     // mean per-bin mass over samples
    std::vector<double> std_error;  // per-bin standard error
    std::size_t samples = 0;

    BinnedMeasure binned() const { return BinnedMeasure(origin, bin_width, masses); }
    std::vector<double> cumulative() const;
};

// Monte Carlo average of binned local trace measures over S samples. The
// energy range is [min eigenvalue - 0.1, max eigenvalue + 0.1] over the run.
IDSEstimate ids_estimate(const RandomModel& model, int samples, int bins, std::uint64_t seed);

// Exact expectation over the full outcome set of a discrete coupling law.
IDSEstimate ids_enumerate(const RandomModel& model, int bins);

// Inner integral of the regularity proof: averaged measure over the single
// coupling at cell 0 with the remaining couplings frozen. A is the
// Hamiltonian with omega_0 = 0, B is multiplication by u on cell 0.
PointMeasure single_site_average(const RandomModel& model,
                                 const std::vector<double>& omega_rest, const Vector& phi,
                                 const QuadratureRule& rule);
OperatorPair single_site_pair(const RandomModel& model,
                              const std::vector<double>& omega_rest);

// Continuity ladder of the estimated IDS; the operational absolute-continuity
// criterion is density_sup stable within x2 across the ladder.
ContinuityReport wegner_report(const IDSEstimate& est, const std::vector<double>& epsilons);

void write_csv_ids(std::ostream& os, const IDSEstimate& est);

}  // namespace specavg
