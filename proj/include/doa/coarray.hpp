#pragma once

#include <cstdint>

#include "doa/geometry.hpp"
#include "doa/signal_model.hpp"
#include "doa/types.hpp"

namespace doa {

enum class CoarrayModel { Dctm, EdctmExact, EdctmEstimated };

/// Coarray-domain measurement vector (one entry per lag), tagged with
/// the model that produced it.
struct CoarrayVector {
    CVec values;
    CoarrayModel model = CoarrayModel::Dctm;
    double alpha = 0.0;  // estimation-noise level, EdctmEstimated only
};

/// Finite-sample error term eta' = <vec(A C_s_hollow A^H)>_H, where the
/// hollow matrix is the realized source sample covariance with its
/// diagonal removed. Simulation-only oracle: needs the true DOAs and
/// the drawn source waveforms.
struct EtaPrime {
    CVec values;
};

struct EtaMoments {
    CVec mean;
    RVec variance;  // E|.|^2 per coarray entry
};

/// Vectorize a sample covariance column-major and select through H.
CoarrayVector dctm(const CMat& cov, const CoarrayIndex& index);

/// Exact error term from the realized D x D source sample covariance.
EtaPrime eta_prime_exact(const ArrayGeometry& geom, const RVec& doas,
                         const CMat& source_sample_cov, const CoarrayIndex& index);

/// Enhanced model: dctm(cov) - eta.
CoarrayVector edctm(const CMat& cov_sample, const EtaPrime& eta,
                    const CoarrayIndex& index);

/// Perturbed estimate eta' + noise, white circular complex Gaussian with
/// per-entry variance alpha * ||eta'||^2 / dof. alpha = 0 reproduces the
/// input exactly.
EtaPrime eta_prime_estimated(const EtaPrime& eta_exact, double alpha, int dof,
                             std::uint64_t seed);

/// Analytic first and second moments of eta' for uncorrelated sources:
/// mean 0, variance (1/T) sum_{i != j} |w_k(i,j)|^2 p_i p_j with
/// w_k(i,j) the H[k]-th entry of conj(a(theta_j)) kron a(theta_i).
EtaMoments eta_prime_moments_oracle(const ArrayGeometry& geom, const RVec& doas,
                                    const RVec& powers, int snapshots);

}  // namespace doa
