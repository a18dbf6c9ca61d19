#include "doa/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "doa/numerics.hpp"

namespace doa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_sparsity(int sparsity, Eigen::Index dof, const char* who) {
    if (sparsity < 1) throw std::invalid_argument(std::string(who) + ": sparsity >= 1 required");
    if (sparsity > dof)
        throw std::invalid_argument(std::string(who) + ": sparsity exceeds DoF");
}

// argmax of |corr| over the ordered index list J; returns position in J
int corr_max_position(const CVec& corr, const std::vector<int>& j_list) {
    int best_pos = 0;
    double best = -1.0;
    for (std::size_t p = 0; p < j_list.size(); ++p) {
        const double mag = std::abs(corr(j_list[p]));
        if (mag > best) {
            best = mag;
            best_pos = static_cast<int>(p);
        }
    }
    return best_pos;
}

void erase_from_sorted(std::vector<int>& j_list, int value) {
    auto it = std::lower_bound(j_list.begin(), j_list.end(), value);
    if (it != j_list.end() && *it == value) j_list.erase(it);
}

// the Q nearest positions in J around n0 (inclusive), clamped at the
// ends of J and extended on the opposite side to keep Q when possible
std::pair<int, int> candidate_window(int n0, int q, int j_size) {
    int lo = n0 - (q - 1) / 2;
    int hi = n0 + q / 2;
    if (lo < 0) {
        hi += -lo;
        lo = 0;
    }
    if (hi > j_size - 1) {
        lo -= hi - (j_size - 1);
        hi = j_size - 1;
    }
    if (lo < 0) lo = 0;
    return {lo, hi};
}

// indices of the k largest-magnitude entries, ties broken by index
std::vector<int> top_k_indices(const CVec& values, int k) {
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    const int keep = std::min<int>(k, static_cast<int>(values.size()));
    std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                      [&](int a, int b) {
                          const double ma = std::abs(values(a)), mb = std::abs(values(b));
                          if (ma != mb) return ma > mb;
                          return a < b;
                      });
    order.resize(keep);
    return order;
}

RecoveryResult finish(std::vector<int> support, const CMat& dictionary, const CVec& y,
                      const AngularGrid& grid, std::vector<IterationTrace> trace = {}) {
    RecoveryResult result;
    result.support = std::move(support);
    result.coefficients = restricted_least_squares(dictionary, y, result.support);
    result.doa_estimates = extract_doas(result.support, grid);
    result.trace = std::move(trace);
    return result;
}

}  // namespace

RVec extract_doas(const std::vector<int>& support, const AngularGrid& grid) {
    std::vector<double> angles;
    angles.reserve(support.size());
    for (int idx : support)
        if (idx != grid.size()) angles.push_back(grid.angles(idx));
    std::sort(angles.begin(), angles.end());
    return Eigen::Map<RVec>(angles.data(), static_cast<Eigen::Index>(angles.size()));
}

RecoveryResult omp(const CMat& dictionary, const CVec& y, int sparsity,
                   const AngularGrid& grid) {
    check_sparsity(sparsity, dictionary.rows(), "omp");
    const int g = grid.size();
    const int noise_atom = g;

    std::vector<int> support{noise_atom};
    std::vector<int> j_list(g);
    std::iota(j_list.begin(), j_list.end(), 0);

    // h starts at zero: the pre-selected noise atom is fitted only after
    // the first grid atom joins. Its zero-lag contribution then biases
    // every correlation by the same positive constant, which keeps true
    // peaks dominant over oscillating sidelobes in multi-source scenes.
    CVec h = CVec::Zero(g + 1);
    for (int iter = 0; iter + 1 < sparsity; ++iter) {
        const CVec corr = dictionary.adjoint() * (y - dictionary * h);
        const int pos = corr_max_position(corr, j_list);
        const int chosen = j_list[pos];
        support.push_back(chosen);
        erase_from_sorted(j_list, chosen);
        h = restricted_least_squares(dictionary, y, support);
    }
    return finish(std::move(support), dictionary, y, grid);
}

RecoveryResult lbml_omp(const CMat& dictionary, const CVec& y, int sparsity,
                        const CMat& grid_manifold, const CMat& sample_cov,
                        int n_sensors, int n_candidates, const AngularGrid& grid) {
    check_sparsity(sparsity, dictionary.rows(), "lbml_omp");
    if (n_candidates < 1 || n_candidates % 2 == 0)
        throw std::invalid_argument("lbml_omp: candidate count must be odd and positive");
    if (grid_manifold.rows() != n_sensors || grid_manifold.cols() != grid.size())
        throw std::invalid_argument("lbml_omp: manifold must be N x g");
    if (sample_cov.rows() != n_sensors || sample_cov.cols() != n_sensors)
        throw std::invalid_argument("lbml_omp: covariance must be N x N");

    const int g = grid.size();
    const int noise_atom = g;

    std::vector<int> support{noise_atom};
    std::vector<int> atoms;  // grid atoms in insertion order
    std::vector<int> j_list(g);
    std::iota(j_list.begin(), j_list.end(), 0);
    std::vector<IterationTrace> trace;

    CVec h = CVec::Zero(g + 1);
    for (int iter = 0; iter + 1 < sparsity; ++iter) {
        const CVec corr = dictionary.adjoint() * (y - dictionary * h);
        const int n0 = corr_max_position(corr, j_list);
        const auto [lo, hi] = candidate_window(n0, n_candidates, static_cast<int>(j_list.size()));

        // window of previous atoms: the latest elements only, capped so
        // that |Y_q| <= N-1 and the ML denominator N - |Y_q| stays >= 1
        const int n_window = std::min<int>(static_cast<int>(atoms.size()), n_sensors - 2);
        std::vector<int> support_candidate(atoms.end() - n_window, atoms.end());
        support_candidate.push_back(-1);  // slot for v_q

        IterationTrace it;
        double best_score = kInf;
        int best_candidate = -1;
        CMat columns(n_sensors, n_window + 1);
        for (int w = 0; w < n_window; ++w)
            columns.col(w) = grid_manifold.col(support_candidate[w]);
        for (int p = lo; p <= hi; ++p) {
            const int v = j_list[p];
            it.candidates.push_back(v);
            columns.col(n_window) = grid_manifold.col(v);
            double score = kInf;
            try {
                score = ml_score(projector(columns), sample_cov, n_window + 1);
            } catch (const RankError&) {
                score = kInf;
            }
            if (score < best_score) {
                best_score = score;
                best_candidate = v;
            }
        }
        if (best_candidate < 0) {
            // every candidate was rank-deficient; fall back to corr-max
            best_candidate = j_list[n0];
            it.fallback = true;
        }
        it.chosen = best_candidate;
        trace.push_back(std::move(it));

        support.push_back(best_candidate);
        atoms.push_back(best_candidate);
        erase_from_sorted(j_list, best_candidate);
        h = restricted_least_squares(dictionary, y, support);
    }
    return finish(std::move(support), dictionary, y, grid, std::move(trace));
}

RecoveryResult omp(const Dictionary& dict, const CVec& y, int sparsity) {
    return omp(dict.atoms, y, sparsity, dict.grid);
}

RecoveryResult lbml_omp(const Dictionary& dict, const CVec& y, int sparsity,
                        const CMat& sample_cov, int n_sensors, int n_candidates) {
    return lbml_omp(dict.atoms, y, sparsity, dict.physical_manifold, sample_cov,
                    n_sensors, n_candidates, dict.grid);
}

RecoveryResult romp(const CMat& dictionary, const CVec& y, int sparsity,
                    const AngularGrid& grid) {
    RecoveryResult result;
    result.coefficients = CVec::Zero(dictionary.cols());
    if (sparsity == 0 || y.norm() == 0.0) {
        result.doa_estimates = RVec(0);
        return result;
    }
    check_sparsity(sparsity, dictionary.rows(), "romp");

    std::vector<int> support;
    CVec h = CVec::Zero(dictionary.cols());
    const double y_norm = y.norm();
    while (static_cast<int>(support.size()) < sparsity) {
        const CVec proxy = dictionary.adjoint() * (y - dictionary * h);
        auto order = top_k_indices(proxy, sparsity + static_cast<int>(support.size()));
        std::vector<int> cands;
        std::vector<double> mags;
        for (int idx : order) {
            if (std::find(support.begin(), support.end(), idx) != support.end()) continue;
            const double mag = std::abs(proxy(idx));
            if (mag < 1e-12 * y_norm) continue;
            cands.push_back(idx);
            mags.push_back(mag);
            if (static_cast<int>(cands.size()) == sparsity) break;
        }
        if (cands.empty()) break;

        // maximal-energy run of comparable magnitudes (within factor 2);
        // cands is sorted by magnitude descending
        int best_s = 0, best_e = 0;
        double best_energy = -1.0;
        for (std::size_t s = 0; s < cands.size(); ++s) {
            double energy = 0.0;
            for (std::size_t e = s; e < cands.size() && mags[e] >= 0.5 * mags[s]; ++e) {
                energy += mags[e] * mags[e];
                if (energy > best_energy) {
                    best_energy = energy;
                    best_s = static_cast<int>(s);
                    best_e = static_cast<int>(e);
                }
            }
        }
        for (int i = best_s; i <= best_e; ++i) support.push_back(cands[i]);
        std::sort(support.begin(), support.end());
        if (static_cast<Eigen::Index>(support.size()) > dictionary.rows())
            support.resize(dictionary.rows());
        h = restricted_least_squares(dictionary, y, support);
        if ((y - dictionary * h).norm() < 1e-12 * y_norm) break;
    }
    return finish(std::move(support), dictionary, y, grid);
}

RecoveryResult iht(const CMat& dictionary, const CVec& y, int sparsity,
                   const AngularGrid& grid, int max_iterations,
                   double step_tolerance) {
    RecoveryResult result;
    result.coefficients = CVec::Zero(dictionary.cols());
    if (sparsity == 0 || y.norm() == 0.0) {
        result.doa_estimates = RVec(0);
        return result;
    }
    check_sparsity(sparsity, dictionary.rows(), "iht");

    // spectral norm by power iteration on B^H B, deterministic start
    CVec v = CVec::Ones(dictionary.cols()) / std::sqrt(double(dictionary.cols()));
    double norm_sq = 1.0;
    for (int it = 0; it < 50; ++it) {
        CVec w = dictionary.adjoint() * (dictionary * v);
        const double next = w.norm();
        if (next == 0.0) break;
        w /= next;
        if (std::abs(next - norm_sq) < 1e-6 * next && it > 1) {
            norm_sq = next;
            break;
        }
        norm_sq = next;
        v = w;
    }
    const double step = 1.0 / norm_sq;

    CVec h = CVec::Zero(dictionary.cols());
    for (int it = 0; it < max_iterations; ++it) {
        CVec updated = h + step * (dictionary.adjoint() * (y - dictionary * h));
        const auto keep = top_k_indices(updated, sparsity);
        CVec thresholded = CVec::Zero(dictionary.cols());
        for (int idx : keep) thresholded(idx) = updated(idx);
        const double change = (thresholded - h).norm();
        h = thresholded;
        if (change <= step_tolerance * std::max(h.norm(), 1e-300)) break;
    }

    std::vector<int> support;
    for (Eigen::Index i = 0; i < h.size(); ++i)
        if (h(i) != Complex(0.0, 0.0)) support.push_back(static_cast<int>(i));
    return finish(std::move(support), dictionary, y, grid);
}

RecoveryResult cosamp(const CMat& dictionary, const CVec& y, int sparsity,
                      const AngularGrid& grid, int max_iterations,
                      double step_tolerance) {
    RecoveryResult result;
    result.coefficients = CVec::Zero(dictionary.cols());
    if (sparsity == 0 || y.norm() == 0.0) {
        result.doa_estimates = RVec(0);
        return result;
    }
    check_sparsity(sparsity, dictionary.rows(), "cosamp");

    const double y_norm = y.norm();
    std::vector<int> support;
    CVec h = CVec::Zero(dictionary.cols());
    double prev_residual = y_norm;
    for (int it = 0; it < max_iterations; ++it) {
        const CVec proxy = dictionary.adjoint() * (y - dictionary * h);
        auto merged = top_k_indices(proxy, 2 * sparsity);
        merged.insert(merged.end(), support.begin(), support.end());
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        if (static_cast<Eigen::Index>(merged.size()) > dictionary.rows()) {
            std::sort(merged.begin(), merged.end(), [&](int a, int b) {
                const double ma = std::abs(proxy(a)), mb = std::abs(proxy(b));
                if (ma != mb) return ma > mb;
                return a < b;
            });
            merged.resize(dictionary.rows());
            std::sort(merged.begin(), merged.end());
        }

        CVec ls;
        while (true) {
            try {
                ls = restricted_least_squares(dictionary, y, merged);
                break;
            } catch (const RankError&) {
                // drop the weakest-proxy column and retry
                auto weakest = std::min_element(merged.begin(), merged.end(),
                                                [&](int a, int b) {
                                                    return std::abs(proxy(a)) < std::abs(proxy(b));
                                                });
                merged.erase(weakest);
                if (merged.empty()) break;
            }
        }
        if (merged.empty()) break;

        CVec ls_on_merged(merged.size());
        for (std::size_t i = 0; i < merged.size(); ++i) ls_on_merged(i) = ls(merged[i]);
        auto keep = top_k_indices(ls_on_merged, sparsity);
        std::vector<int> pruned;
        pruned.reserve(keep.size());
        for (int k : keep) pruned.push_back(merged[k]);
        std::sort(pruned.begin(), pruned.end());

        // re-solve on the pruned support; on coherent dictionaries the
        // merged-support coefficients are wildly cancelling and would
        // leave a misleading residual behind
        try {
            h = restricted_least_squares(dictionary, y, pruned);
        } catch (const RankError&) {
            h = CVec::Zero(dictionary.cols());
            for (int idx : pruned) h(idx) = ls(idx);
        }
        support = std::move(pruned);

        const double residual = (y - dictionary * h).norm();
        if (residual < 1e-12 * y_norm) break;
        if (std::abs(residual - prev_residual) <= step_tolerance * y_norm) break;
        prev_residual = residual;
    }
    return finish(std::move(support), dictionary, y, grid);
}

}  // namespace doa
