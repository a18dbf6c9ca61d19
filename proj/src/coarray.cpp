#include "doa/coarray.hpp"

#include <cmath>
#include <sstream>

#include "doa/rng.hpp"

namespace doa {

namespace {

void check_cov_size(const CMat& cov, const CoarrayIndex& index, const char* who) {
    const auto n2 = static_cast<Eigen::Index>(index.diff_vector.size());
    if (cov.rows() * cov.cols() != n2 || cov.rows() != cov.cols()) {
        std::ostringstream os;
        os << who << ": covariance size " << cov.rows() << "x" << cov.cols()
           << " does not match geometry (N^2 = " << n2 << ")";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

CoarrayVector dctm(const CMat& cov, const CoarrayIndex& index) {
    check_cov_size(cov, index, "dctm");
    // Eigen is column-major, so the raw storage is exactly vec(cov)
    Eigen::Map<const CVec> vec(cov.data(), cov.size());
    CoarrayVector out;
    out.values = coarray_select(CVec(vec), index);
    out.model = CoarrayModel::Dctm;
    return out;
}

EtaPrime eta_prime_exact(const ArrayGeometry& geom, const RVec& doas,
                         const CMat& source_sample_cov, const CoarrayIndex& index) {
    if (source_sample_cov.rows() != doas.size() ||
        source_sample_cov.cols() != doas.size())
        throw std::invalid_argument("eta_prime_exact: source covariance must be DxD");
    CMat hollow = source_sample_cov;
    hollow.diagonal().setZero();
    const CMat manifold = steering_matrix(geom, doas);
    const CMat error = manifold * hollow * manifold.adjoint();
    Eigen::Map<const CVec> vec(error.data(), error.size());
    EtaPrime eta;
    eta.values = coarray_select(CVec(vec), index);
    return eta;
}

CoarrayVector edctm(const CMat& cov_sample, const EtaPrime& eta,
                    const CoarrayIndex& index) {
    CoarrayVector out = dctm(cov_sample, index);
    if (eta.values.size() != out.values.size())
        throw std::invalid_argument("edctm: eta length does not match DoF");
    out.values -= eta.values;
    out.model = CoarrayModel::EdctmExact;
    return out;
}

EtaPrime eta_prime_estimated(const EtaPrime& eta_exact, double alpha, int dof,
                             std::uint64_t seed) {
    if (alpha < 0.0) throw std::invalid_argument("eta_prime_estimated: alpha >= 0");
    if (eta_exact.values.size() != dof)
        throw std::invalid_argument("eta_prime_estimated: dof mismatch");
    EtaPrime out = eta_exact;
    if (alpha == 0.0) return out;
    const double variance = alpha * eta_exact.values.squaredNorm() / dof;
    const double scale = std::sqrt(variance);
    Rng rng(seed);
    for (int k = 0; k < dof; ++k) out.values(k) += scale * rng.complex_normal();
    return out;
}

EtaMoments eta_prime_moments_oracle(const ArrayGeometry& geom, const RVec& doas,
                                    const RVec& powers, int snapshots) {
    const int d = static_cast<int>(doas.size());
    const int n = geom.size();
    const CoarrayIndex index = coarray_index(geom);
    const CMat manifold = steering_matrix(geom, doas);

    EtaMoments moments;
    moments.mean = CVec::Zero(index.dof);
    moments.variance = RVec::Zero(index.dof);
    // w_k(i,j) = [conj(a(theta_j)) kron a(theta_i)]_{H[k]}; element m of
    // the Kronecker product is conj(a_col)*a_row with m = col*N + row
    for (int k = 0; k < index.dof; ++k) {
        const int m = index.selection[k];
        const int row = m % n;
        const int col = m / n;
        double sum = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (i == j) continue;
                const Complex w = manifold(row, i) * std::conj(manifold(col, j));
                sum += std::norm(w) * powers(i) * powers(j);
            }
        moments.variance(k) = sum / snapshots;
    }
    return moments;
}

}  // namespace doa
