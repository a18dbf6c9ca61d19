#include "doa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace doa {

std::vector<int> hungarian(const RMat& cost) {
    // potentials form of the Hungarian algorithm, O(rows^2 * cols)
    const int rows = static_cast<int>(cost.rows());
    const int cols = static_cast<int>(cost.cols());
    if (rows > cols) throw std::invalid_argument("hungarian: rows must be <= cols");
    if (rows == 0) return {};

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
    std::vector<int> match(cols + 1, 0);  // 1-based row matched to column
    for (int r = 1; r <= rows; ++r) {
        match[0] = r;
        int j0 = 0;
        std::vector<double> min_slack(cols + 1, inf);
        std::vector<int> slack_from(cols + 1, 0);
        std::vector<char> used(cols + 1, false);
        do {
            used[j0] = true;
            const int r0 = match[j0];
            double delta = inf;
            int j1 = -1;
            for (int j = 1; j <= cols; ++j) {
                if (used[j]) continue;
                const double slack = cost(r0 - 1, j - 1) - u[r0] - v[j];
                if (slack < min_slack[j]) {
                    min_slack[j] = slack;
                    slack_from[j] = j0;
                }
                if (min_slack[j] < delta) {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= cols; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        // augment along the alternating path
        while (j0 != 0) {
            const int j1 = slack_from[j0];
            match[j0] = match[j1];
            j0 = j1;
        }
    }

    std::vector<int> assignment(rows, -1);
    for (int j = 1; j <= cols; ++j)
        if (match[j] != 0) assignment[match[j] - 1] = j - 1;
    return assignment;
}

namespace {

double cutoff(double a, double b, double phi) {
    return std::min(phi, std::abs(a - b));
}

// minimum-assignment sum of squared cutoff distances, smaller set into
// larger, plus phi^2 per unmatched element of the larger set
double assignment_core(const RVec& estimates, const RVec& truth, double phi) {
    const int d_hat = static_cast<int>(estimates.size());
    const int d = static_cast<int>(truth.size());
    const RVec& small = d_hat <= d ? estimates : truth;
    const RVec& large = d_hat <= d ? truth : estimates;
    double sum = 0.0;
    if (small.size() > 0) {
        RMat cost(small.size(), large.size());
        for (Eigen::Index i = 0; i < small.size(); ++i)
            for (Eigen::Index j = 0; j < large.size(); ++j) {
                const double c = cutoff(small(i), large(j), phi);
                cost(i, j) = c * c;
            }
        const auto matched = hungarian(cost);
        for (Eigen::Index i = 0; i < small.size(); ++i) sum += cost(i, matched[i]);
    }
    sum += phi * phi * static_cast<double>(large.size() - small.size());
    return sum;
}

}  // namespace

double ospa_trial_term(const RVec& estimates, const RVec& truth, double phi) {
    if (truth.size() == 0) throw std::invalid_argument("ospa: truth must be non-empty");
    if (phi <= 0.0) throw std::invalid_argument("ospa: phi must be positive");
    const double d = static_cast<double>(truth.size());
    const double d_max = std::max<double>(d, static_cast<double>(estimates.size()));
    return assignment_core(estimates, truth, phi) * (d / d_max);
}

double ospa_single_trial(const RVec& estimates, const RVec& truth, double phi) {
    return ospa_trial_term(estimates, truth, phi) / static_cast<double>(truth.size());
}

double ospa_aggregate(const std::vector<double>& per_trial_terms, int n_truth,
                      int trials) {
    if (trials < 1) throw std::invalid_argument("ospa_aggregate: L >= 1 required");
    double sum = 0.0;
    for (double t : per_trial_terms) sum += t;
    return std::sqrt(sum / (static_cast<double>(trials) * n_truth));
}

}  // namespace doa
