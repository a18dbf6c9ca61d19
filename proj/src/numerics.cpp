#include "doa/numerics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace doa {

namespace {

constexpr double kRankTolerance = 1e-10;
constexpr double kSingularFloor = 1e-30;

}  // namespace

Projector Projector::zero(int n) {
    Projector p;
    p.onto = CMat::Zero(n, n);
    p.complement = CMat::Identity(n, n);
    p.rank = 0;
    return p;
}

Projector projector(const CMat& columns) {
    const auto n = columns.rows();
    const auto m = columns.cols();
    if (m == 0) return Projector::zero(static_cast<int>(n));
    if (m > n) throw RankError("projector: more columns than rows");

    Eigen::ColPivHouseholderQR<CMat> qr(columns);
    const double pivot0 = std::abs(qr.matrixR()(0, 0));
    for (Eigen::Index i = 0; i < m; ++i) {
        if (std::abs(qr.matrixR()(i, i)) <= kRankTolerance * pivot0) {
            std::ostringstream os;
            os << "projector: rank-deficient input (" << n << "x" << m << ")";
            throw RankError(os.str());
        }
    }
    CMat q = qr.householderQ() * CMat::Identity(n, m);
    Projector p;
    p.onto = q * q.adjoint();
    p.complement = CMat::Identity(n, n) - p.onto;
    p.rank = static_cast<int>(m);
    return p;
}

CVec restricted_least_squares(const CMat& dictionary, const CVec& y,
                              const std::vector<int>& support) {
    CVec solution = CVec::Zero(dictionary.cols());
    if (support.empty()) return solution;
    const auto m = static_cast<Eigen::Index>(support.size());
    if (m > dictionary.rows())
        throw RankError("restricted_least_squares: support larger than measurement");

    CMat restricted(dictionary.rows(), m);
    for (Eigen::Index j = 0; j < m; ++j) restricted.col(j) = dictionary.col(support[j]);

    Eigen::ColPivHouseholderQR<CMat> qr(restricted);
    const double pivot0 = std::abs(qr.matrixR()(0, 0));
    for (Eigen::Index i = 0; i < m; ++i)
        if (std::abs(qr.matrixR()(i, i)) <= kRankTolerance * pivot0)
            throw RankError("restricted_least_squares: rank-deficient support");

    const CVec coeffs = qr.solve(y);
    for (Eigen::Index j = 0; j < m; ++j) solution(support[j]) = coeffs(j);
    return solution;
}

EigResult hermitian_eig(const CMat& matrix) {
    if (matrix.rows() != matrix.cols())
        throw std::invalid_argument("hermitian_eig: square matrix required");
    const CMat sym = 0.5 * (matrix + matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> solver(sym);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eig: eigendecomposition did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double ml_score(const Projector& projector, const CMat& cov, int support_size) {
    const auto n = cov.rows();
    if (support_size >= n)
        throw std::invalid_argument("ml_score: support size must be < N");
    CMat arg = projector.onto * cov * projector.onto;
    const double noise_estimate =
        (projector.complement * cov).trace().real() / static_cast<double>(n - support_size);
    arg += noise_estimate * projector.complement;

    const CMat sym = 0.5 * (arg + arg.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        return std::numeric_limits<double>::infinity();
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lambda = solver.eigenvalues()(i);
        if (lambda < kSingularFloor) return std::numeric_limits<double>::infinity();
        log_det += std::log(lambda);
    }
    return log_det;
}

}  // namespace doa
