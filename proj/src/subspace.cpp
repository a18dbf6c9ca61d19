#include "doa/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "doa/numerics.hpp"

namespace doa {

double MusicSpectrum::peak_to_median() const {
    std::vector<double> sorted(values.data(), values.data() + values.size());
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double peak = sorted.back();
    return median > 0.0 ? peak / median : std::numeric_limits<double>::infinity();
}

int contiguous_segment(const CoarrayIndex& index) {
    int m = 0;
    const auto has_lag = [&](int lag) {
        return std::binary_search(index.lags.begin(), index.lags.end(), lag);
    };
    while (has_lag(m + 1) && has_lag(-(m + 1))) ++m;
    return m;
}

MusicResult ss_music(const CoarrayVector& coarray_vec, const CoarrayIndex& index,
                     const AngularGrid& grid, int n_sources) {
    if (n_sources < 1) throw std::invalid_argument("ss_music: D >= 1 required");
    if (coarray_vec.values.size() != index.dof)
        throw std::invalid_argument("ss_music: coarray vector length != DoF");
    const int m = contiguous_segment(index);
    if (n_sources >= m + 1)
        throw std::invalid_argument("ss_music: D >= M+1, insufficient coarray aperture");

    // entry for lag l lives at the middle row + l (lags are contiguous
    // around zero inside the segment)
    const int zero_row = index.zero_lag_row();
    const auto at_lag = [&](int lag) { return coarray_vec.values(zero_row + lag); };

    // subvector i spans lags i-M .. i; average the outer products
    const int sub = m + 1;
    CMat smoothed = CMat::Zero(sub, sub);
    CVec z(sub);
    for (int i = 0; i <= m; ++i) {
        for (int t = 0; t < sub; ++t) z(t) = at_lag(i - m + t);
        smoothed += z * z.adjoint();
    }
    smoothed /= static_cast<double>(sub);

    const EigResult eig = hermitian_eig(smoothed);
    const int noise_dim = sub - n_sources;
    const CMat noise_subspace = eig.eigenvectors.leftCols(noise_dim);

    // segment steering for virtual ULA offsets 0..M; the sign matches
    // the coarray measurement convention (value(lag) ~ exp(-j pi lag s))
    MusicResult result;
    result.spectrum.grid = grid;
    result.spectrum.values.resize(grid.size());
    CVec steer(sub);
    for (int p = 0; p < grid.size(); ++p) {
        const double s = grid.sines(p);
        for (int t = 0; t < sub; ++t) steer(t) = std::polar(1.0, -kPi * t * s);
        const double denom = (noise_subspace.adjoint() * steer).squaredNorm();
        result.spectrum.values(p) = denom > 0.0 ? 1.0 / denom
                                                : std::numeric_limits<double>::max();
    }

    // strict local maxima ranked by height, top D
    std::vector<std::pair<double, int>> peaks;
    for (int p = 1; p + 1 < grid.size(); ++p) {
        const double v = result.spectrum.values(p);
        if (v > result.spectrum.values(p - 1) && v > result.spectrum.values(p + 1))
            peaks.emplace_back(v, p);
    }
    std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    const int found = std::min<int>(n_sources, static_cast<int>(peaks.size()));
    std::vector<double> angles;
    angles.reserve(found);
    for (int i = 0; i < found; ++i) angles.push_back(grid.angles(peaks[i].second));
    std::sort(angles.begin(), angles.end());
    result.doas = Eigen::Map<RVec>(angles.data(), found);
    return result;
}

void write_spectrum_csv(const MusicSpectrum& spectrum, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "sine,value\n";
    char line[64];
    for (int i = 0; i < spectrum.grid.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.10g,%.10g\n", spectrum.grid.sines(i),
                      spectrum.values(i));
        out << line;
    }
}

}  // namespace doa
