#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "doa/types.hpp"

namespace doa {

enum class GeometryKind { Ula, Naq2, Snaq2, Mra, Mha, Custom };

GeometryKind parse_geometry_kind(std::string_view name);
std::string to_string(GeometryKind kind);

/// Sensor positions of a non-uniform linear array, in units of the
/// half-wavelength grid. Positions are strictly increasing integers.
struct ArrayGeometry {
    std::vector<int> positions;
    GeometryKind kind = GeometryKind::Custom;

    int size() const { return static_cast<int>(positions.size()); }
    int aperture() const { return positions.back() - positions.front(); }
};

/// Difference-coarray bookkeeping for a geometry:
///   diff_vector  all N^2 pairwise differences c, Kronecker order
///                (c[i*N + k] = n_i - n_k)
///   selection    for each distinct lag (ascending), the smallest linear
///                index into c where it first occurs
///   lags         the sorted distinct differences
struct CoarrayIndex {
    std::vector<int> diff_vector;
    std::vector<int> selection;
    std::vector<int> lags;
    int dof = 0;

    /// Row of the zero lag; lags are symmetric so this is the middle.
    int zero_lag_row() const { return (dof - 1) / 2; }
};

/// Build one of the named geometries.
/// ULA and NAQ2 accept any N >= 2. NAQ2 splits N1 = ceil(N/2),
/// N2 = floor(N/2), inner {1..N1}, outer {m(N1+1)}.
/// SNAQ2 (N = 7..10), MRA and MHA (N = 3..10) come from built-in tables.
/// Throws std::invalid_argument for unsupported kind/size combinations.
ArrayGeometry build_geometry(GeometryKind kind, int n_sensors);

/// Wrap explicit positions (sorted ascending, distinct, N >= 2).
ArrayGeometry custom_geometry(std::vector<int> positions);

/// Load a custom geometry from a plain-text file: one integer position
/// per line, ascending.
ArrayGeometry load_geometry_file(const std::string& path);

/// Compute the difference coarray index structures for a geometry.
CoarrayIndex coarray_index(const ArrayGeometry& geom);

/// Apply the coarray selection: out[k] = full[selection[k]].
/// Throws std::invalid_argument if full.size() != N^2.
CVec coarray_select(const CVec& full_vector, const CoarrayIndex& index);

}  // namespace doa
