#pragma once

#include <vector>

#include "doa/types.hpp"

namespace doa {

/// Orthogonal projector onto the span of a set of columns, with its
/// complement. Hermitian and idempotent to 1e-9 relative.
struct Projector {
    CMat onto;        // P
    CMat complement;  // I - P
    int rank = 0;

    /// Rank-zero projector (P = 0); the empty-support limit.
    static Projector zero(int n);
};

/// Build the projector onto the column span. The input must have full
/// column rank (checked via pivoted QR, relative tolerance 1e-10);
/// otherwise RankError is thrown.
Projector projector(const CMat& columns);

/// Least squares restricted to a support: returns the full-length vector
/// that is zero off-support and minimizes ||y - B z||_2 on the support.
/// Solved by pivoted QR; throws RankError on rank-deficient support.
CVec restricted_least_squares(const CMat& dictionary, const CVec& y,
                              const std::vector<int>& support);

struct EigResult {
    RVec eigenvalues;  // ascending
    CMat eigenvectors; // unitary, column k pairs with eigenvalues[k]
};

/// Eigendecomposition of a Hermitian matrix (symmetrized first).
EigResult hermitian_eig(const CMat& matrix);

/// Log-domain asymptotic ML candidate score:
///   log det( U C U + tr(U_perp C)/(N - m) U_perp )
/// evaluated via the eigenvalues of the Hermitian argument. Returns
/// +infinity when the argument is numerically singular (an eigenvalue
/// below 1e-30). Log domain keeps the argmin exact for N up to 64 where
/// the raw determinant would overflow.
double ml_score(const Projector& projector, const CMat& cov, int support_size);

}  // namespace doa
