#pragma once

#include <cstdint>

#include "doa/geometry.hpp"
#include "doa/types.hpp"

namespace doa {

/// D uncorrelated narrowband sources plus white noise.
/// Angles are in radians, measured from broadside, inside (-pi/2, pi/2).
struct SourceScene {
    RVec doas;
    RVec powers;
    double noise_power = 0.0;

    int count() const { return static_cast<int>(doas.size()); }
};

/// B-banded mutual coupling: [G]_{l,m} = g(|n_l - n_m|) for differences
/// up to the band, zero beyond. g(0) = 1, g(1) given, and
/// g(k) = g(1) exp(-j(k-1)pi)/k for 2 <= k <= B.
struct CouplingModel {
    bool enabled = false;
    Complex g1{0.0, 0.0};
    int band = 0;
};

/// One simulated acquisition: N x T received samples, the sample
/// covariance (1/T) X X^H, and the drawn D x T source matrix (kept so
/// simulation-only oracles can form the realized source covariance).
struct SnapshotSet {
    CMat samples;
    CMat sample_covariance;
    CMat source_samples;
};

/// Physical array manifold: entry (k, d) = exp(j pi n_k sin(theta_d)).
CMat steering_matrix(const ArrayGeometry& geom, const RVec& doas);

/// Mutual coupling matrix for an enabled model.
CMat coupling_matrix(const ArrayGeometry& geom, const CouplingModel& model);

/// Exact covariance G A diag(p) A^H G^H + sigma_n^2 I (G = I when
/// coupling is disabled).
CMat analytic_covariance(const ArrayGeometry& geom, const SourceScene& scene,
                         const CouplingModel& coupling = {});

/// Draw T snapshots x(t) = G A s(t) + n(t) with circular complex
/// Gaussian sources and noise. Deterministic given the seed.
SnapshotSet simulate_snapshots(const ArrayGeometry& geom, const SourceScene& scene,
                               const CouplingModel& coupling, int snapshots,
                               std::uint64_t seed);

/// Noise power for a given SNR under the unit-source-power convention:
/// SNR(dB) = 10 log10(1 / sigma_n^2).
double noise_power_for_snr_db(double snr_db);

}  // namespace doa
