#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "torsion/geometry.hpp"

namespace torsion {

enum class NodeKind : std::uint8_t { Exterior, Interior, BoundaryAdjacent };

/// Axis directions in the order used by GridMask::arms.
enum Direction : int { East = 0, West = 1, North = 2, South = 3 };

/// Embedded-boundary Cartesian grid over a domain.
///
/// Nodes sit at origin + (i h, j h). A node strictly inside the domain is an
/// unknown; it is Interior when its four axis neighbours are inside too and
/// BoundaryAdjacent otherwise. For every unknown, `arms` holds the fractional
/// leg length theta in (0, 1] towards each neighbour: 1 when the neighbour is
/// an unknown (or the boundary passes exactly through it), otherwise the
/// distance to the boundary along that axis divided by h.
struct GridMask {
  Domain domain;
  Point origin;
  double h = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<NodeKind> kind;
  std::vector<std::array<double, 4>> arms;
  /// Fraction of the dual cell [x - h/2, x + h/2]^2 inside the domain.
  std::vector<double> area_fraction;
  /// Node -> unknown number, -1 for exterior nodes.
  std::vector<int> unknown_of;
  /// Unknown number -> node.
  std::vector<int> node_of;

  int index(int i, int j) const { return j * nx + i; }
  int col(int node) const { return node % nx; }
  int row(int node) const { return node / nx; }
  Point position(int i, int j) const { return origin + h * Point(i, j); }
  Point position(int node) const { return position(col(node), row(node)); }
  bool inside(int i, int j) const {
    return i >= 0 && j >= 0 && i < nx && j < ny && kind[index(i, j)] != NodeKind::Exterior;
  }
  std::size_t unknowns() const { return node_of.size(); }
  std::size_t interior_count() const;
};

/// Throws GridTooCoarse when h >= inradius / 4 or fewer than 16 interior
/// nodes result, InvalidDomain for non-convex domains.
GridMask build_grid(const Domain& domain, double h);

}  // namespace torsion
