#pragma once

#include <string>

#include "doa/coarray.hpp"
#include "doa/dictionary.hpp"
#include "doa/geometry.hpp"
#include "doa/types.hpp"

namespace doa {

struct MusicSpectrum {
    AngularGrid grid;
    RVec values;  // pseudospectrum, non-negative

    /// Ratio of the highest value to the median; low values indicate no
    /// dominant peak (e.g. white-only input).
    double peak_to_median() const;
};

struct MusicResult {
    MusicSpectrum spectrum;
    RVec doas;  // up to D angles, ascending
};

/// Largest M such that all lags -M..M are present in the coarray.
int contiguous_segment(const CoarrayIndex& index);

/// Spatial-smoothing MUSIC on the contiguous coarray segment:
/// restrict the coarray vector to lags -M..M, average the outer products
/// of the M+1 overlapping length-(M+1) subvectors, eigendecompose, and
/// scan the grid with the segment steering vector. Requires D < M+1.
MusicResult ss_music(const CoarrayVector& coarray_vec, const CoarrayIndex& index,
                     const AngularGrid& grid, int n_sources);

/// Two-column CSV export (sine, value) for plotting.
void write_spectrum_csv(const MusicSpectrum& spectrum, const std::string& path);

}  // namespace doa
