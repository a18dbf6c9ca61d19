#pragma once

#include <vector>

#include "doa/types.hpp"

namespace doa {

/// Minimum-cost injective assignment of rows into columns
/// (rows <= cols). Returns, for each row, the assigned column.
std::vector<int> hungarian(const RMat& cost);

/// Un-normalized per-trial OSPA term: the minimum-assignment sum of
/// cutoff distances squared plus the cardinality penalty phi^2 |D - Dhat|,
/// rescaled by D / max(D, Dhat) so a trial can never contribute more
/// than D phi^2 (keeps the aggregated metric inside [0, phi] when an
/// algorithm over-reports sources). For Dhat <= D this is exactly
/// min_assign + phi^2 (D - Dhat).
double ospa_trial_term(const RVec& estimates, const RVec& truth, double phi);

/// Single-trial OSPA squared value, (1/D)-normalized. Aggregate over
/// trials as sqrt(mean).
double ospa_single_trial(const RVec& estimates, const RVec& truth, double phi);

/// sqrt( (1/(L D)) sum of un-normalized trial terms ).
double ospa_aggregate(const std::vector<double>& per_trial_terms, int n_truth,
                      int trials);

}  // namespace doa
