#pragma once

#include <vector>

#include "doa/dictionary.hpp"
#include "doa/types.hpp"

namespace doa {

/// Per-iteration LBML-OMP diagnostics: the candidate list evaluated and
/// the index that won the ML rule. fallback is set when every candidate
/// scored +inf (rank-deficient manifolds) and the plain corr-max index
/// was used instead.
struct IterationTrace {
    std::vector<int> candidates;
    int chosen = -1;
    bool fallback = false;
};

/// Result of one sparse-recovery run. support is in insertion order and
/// uses zero-based dictionary columns (noise atom = grid size g).
/// doa_estimates are the grid angles of the non-noise support, ascending.
struct RecoveryResult {
    std::vector<int> support;
    CVec coefficients;
    RVec doa_estimates;
    std::vector<IterationTrace> trace;
};

/// Map a support to DOA estimates: drop the noise atom if present,
/// return the grid angles of the rest, ascending.
RVec extract_doas(const std::vector<int>& support, const AngularGrid& grid);

/// Orthogonal matching pursuit over the coarray dictionary. The noise
/// atom is pre-selected; sparsity counts it, so sparsity - 1 grid atoms
/// are chosen by correlation maximization.
RecoveryResult omp(const CMat& dictionary, const CVec& y, int sparsity,
                   const AngularGrid& grid);

/// List-based ML OMP: per iteration, the corr-max pick is widened to the
/// n_candidates nearest unselected neighbours and the winner is chosen
/// by the asymptotic ML determinant rule on the physical-array sample
/// covariance. n_candidates = 1 reduces exactly to omp().
RecoveryResult lbml_omp(const CMat& dictionary, const CVec& y, int sparsity,
                        const CMat& grid_manifold, const CMat& sample_cov,
                        int n_sensors, int n_candidates, const AngularGrid& grid);

/// Convenience overloads driven by a built Dictionary.
RecoveryResult omp(const Dictionary& dict, const CVec& y, int sparsity);
RecoveryResult lbml_omp(const Dictionary& dict, const CVec& y, int sparsity,
                        const CMat& sample_cov, int n_sensors, int n_candidates);

/// Regularized OMP baseline: per iteration keep the maximal-energy
/// subset of the top correlations whose magnitudes are within a factor
/// of 2, merge it into the support, least squares.
RecoveryResult romp(const CMat& dictionary, const CVec& y, int sparsity,
                    const AngularGrid& grid);

/// Iterative hard thresholding with step 1/||B||_2^2.
RecoveryResult iht(const CMat& dictionary, const CVec& y, int sparsity,
                   const AngularGrid& grid, int max_iterations = 300,
                   double step_tolerance = 1e-6);

/// Compressive sampling matching pursuit.
RecoveryResult cosamp(const CMat& dictionary, const CVec& y, int sparsity,
                      const AngularGrid& grid, int max_iterations = 300,
                      double step_tolerance = 1e-6);

}  // namespace doa
