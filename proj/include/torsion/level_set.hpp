#pragma once

#include <vector>

#include "torsion/geometry.hpp"

namespace torsion {

class SmoothField;

/// Values on a full rectangular lattice, row-major (index j * nx + i).
/// Nodes outside the field's domain must carry values below any level that
/// is extracted.
struct ScalarLattice {
  Point origin;
  double h = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
  Point position(int i, int j) const { return origin + h * Point(i, j); }
};

/// Samples a planar closed form on a lattice of spacing h covering its
/// natural domain. Nodes outside the domain are forced negative.
ScalarLattice sample_lattice(const SmoothField& field, double h);

/// Marching squares with linear edge interpolation; saddle cells are resolved
/// by the cell-centre average. Returns the longest closed component,
/// counter-clockwise. Throws EmptyLevelSet when c is not below the lattice
/// maximum (or c <= 0), LevelSetTouchesBoundary when the set reaches the
/// lattice edge.
std::vector<Point> marching_level_set(const ScalarLattice& lattice, double c);

}  // namespace torsion
