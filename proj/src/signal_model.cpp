#include "doa/signal_model.hpp"

#include <cmath>

#include "doa/rng.hpp"

namespace doa {

CMat steering_matrix(const ArrayGeometry& geom, const RVec& doas) {
    const int n = geom.size();
    const auto d = doas.size();
    CMat manifold(n, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double s = std::sin(doas(j));
        for (int k = 0; k < n; ++k)
            manifold(k, j) = std::polar(1.0, kPi * geom.positions[k] * s);
    }
    return manifold;
}

CMat coupling_matrix(const ArrayGeometry& geom, const CouplingModel& model) {
    if (!model.enabled)
        throw std::invalid_argument("coupling_matrix: model disabled");
    const int n = geom.size();
    CMat g = CMat::Zero(n, n);
    for (int l = 0; l < n; ++l) {
        for (int m = 0; m < n; ++m) {
            const int k = std::abs(geom.positions[l] - geom.positions[m]);
            if (k > model.band) continue;
            if (k == 0)
                g(l, m) = 1.0;
            else if (k == 1)
                g(l, m) = model.g1;
            else
                g(l, m) = model.g1 * std::polar(1.0, -(k - 1) * kPi) / static_cast<double>(k);
        }
    }
    return g;
}

CMat analytic_covariance(const ArrayGeometry& geom, const SourceScene& scene,
                         const CouplingModel& coupling) {
    const int n = geom.size();
    CMat a = steering_matrix(geom, scene.doas);
    if (coupling.enabled) a = coupling_matrix(geom, coupling) * a;
    CMat cov = a * scene.powers.asDiagonal().toDenseMatrix().cast<Complex>() * a.adjoint();
    cov += scene.noise_power * CMat::Identity(n, n);
    return cov;
}

SnapshotSet simulate_snapshots(const ArrayGeometry& geom, const SourceScene& scene,
                               const CouplingModel& coupling, int snapshots,
                               std::uint64_t seed) {
    if (snapshots < 1) throw std::invalid_argument("simulate_snapshots: T >= 1 required");
    const int n = geom.size();
    const int d = scene.count();
    Rng rng(seed);

    // draw order is fixed (sources column-major, then noise) so a seed
    // pins the byte-exact result
    CMat sources(d, snapshots);
    for (int t = 0; t < snapshots; ++t)
        for (int i = 0; i < d; ++i)
            sources(i, t) = std::sqrt(scene.powers(i)) * rng.complex_normal();

    CMat mix = steering_matrix(geom, scene.doas);
    if (coupling.enabled) mix = coupling_matrix(geom, coupling) * mix;

    SnapshotSet out;
    out.samples = mix * sources;
    if (scene.noise_power > 0.0) {
        const double sigma = std::sqrt(scene.noise_power);
        for (int t = 0; t < snapshots; ++t)
            for (int k = 0; k < n; ++k)
                out.samples(k, t) += sigma * rng.complex_normal();
    }
    out.sample_covariance = (out.samples * out.samples.adjoint()) / static_cast<double>(snapshots);
    out.source_samples = std::move(sources);
    return out;
}

double noise_power_for_snr_db(double snr_db) {
    return std::pow(10.0, -snr_db / 10.0);
}

}  // namespace doa
