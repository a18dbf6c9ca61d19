#include "doa/dictionary.hpp"

#include <cmath>

#include "doa/signal_model.hpp"

namespace doa {

int AngularGrid::nearest_bin(double sine) const {
    const int g = size();
    const double step = 2.0 / g;
    int bin = static_cast<int>(std::lround((sine + 1.0) / step));
    if (bin < 0) bin = 0;
    if (bin > g - 1) bin = g - 1;
    return bin;
}

AngularGrid build_grid(int g) {
    if (g < 2) throw std::invalid_argument("build_grid: g >= 2 required");
    AngularGrid grid;
    grid.sines.resize(g);
    grid.angles.resize(g);
    // uniform in sine over [-1, 1 - 2/g]; the half-open span keeps
    // sin = +1 (an alias of -1 on integer positions) off the grid
    for (int i = 0; i < g; ++i) {
        grid.sines(i) = -1.0 + 2.0 * i / g;
        grid.angles(i) = std::asin(grid.sines(i));
    }
    return grid;
}

Dictionary build_dictionary(const ArrayGeometry& geom, const CoarrayIndex& index,
                            const AngularGrid& grid) {
    const int n = geom.size();
    if (static_cast<std::size_t>(n) * n != index.diff_vector.size())
        throw std::invalid_argument("build_dictionary: geometry/index mismatch");
    const int g = grid.size();

    Dictionary dict;
    dict.grid = grid;
    dict.physical_manifold = steering_matrix(geom, grid.angles);
    dict.atoms.resize(index.dof, g + 1);

    // column d is the H-selection of conj(a_d) kron a_d
    for (int d = 0; d < g; ++d) {
        for (int k = 0; k < index.dof; ++k) {
            const int m = index.selection[k];
            const int row = m % n;
            const int col = m / n;
            dict.atoms(k, d) =
                dict.physical_manifold(row, d) * std::conj(dict.physical_manifold(col, d));
        }
    }
    dict.atoms.col(g).setZero();
    dict.atoms(index.zero_lag_row(), g) = 1.0;
    return dict;
}

}  // namespace doa
