#pragma once

#include "doa/geometry.hpp"
#include "doa/types.hpp"

namespace doa {

/// Angular search grid, uniform in sine over [-1, 1 - 2/g).
struct AngularGrid {
    RVec sines;
    RVec angles;

    int size() const { return static_cast<int>(sines.size()); }

    /// Index of the grid point whose sine is closest to the given value.
    int nearest_bin(double sine) const;
};

AngularGrid build_grid(int g);

/// Coarray dictionary B = [A_D(theta^g) | i], dof x (g+1). Column d is
/// the H-selection of conj(a(theta_d)) kron a(theta_d); the last column
/// is the noise atom (1 at the zero-lag row). Also carries the physical
/// on-grid manifold A_S(theta^g) needed by the ML candidate scoring.
struct Dictionary {
    CMat atoms;
    AngularGrid grid;
    CMat physical_manifold;

    /// Zero-based column index of the noise atom (spec index g+1).
    int noise_atom() const { return grid.size(); }
};

Dictionary build_dictionary(const ArrayGeometry& geom, const CoarrayIndex& index,
                            const AngularGrid& grid);

}  // namespace doa
