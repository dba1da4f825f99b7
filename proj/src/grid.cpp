#include "torsion/grid.hpp"

#include <algorithm>
#include <cmath>

#include "torsion/errors.hpp"

namespace torsion {

namespace {

// Arms below this are clamped; keeps the diagonal finite when a node sits
// within round-off of the boundary.
constexpr double kMinArm = 1e-10;
// Lattice padding beyond the bounding box, in nodes. Ghost layers and
// level-set extraction need room outside the domain.
constexpr int kPad = 4;

const std::array<std::array<int, 2>, 4> kSteps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

}  // namespace

std::size_t GridMask::interior_count() const {
  return static_cast<std::size_t>(std::count(kind.begin(), kind.end(), NodeKind::Interior));
}

GridMask build_grid(const Domain& domain, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("grid spacing must be positive");
  if (!domain.is_convex()) throw InvalidDomain("only convex domains can be gridded");
  if (h >= 0.25 * domain.inradius()) {
    throw GridTooCoarse("grid spacing must be below a quarter of the inradius");
  }

  GridMask m{domain, Point::Zero(), h, 0, 0, {}, {}, {}, {}, {}};
  const BoundingBox box = domain.bounds();
  const int i0 = static_cast<int>(std::floor(box.lo.x() / h)) - kPad;
  const int j0 = static_cast<int>(std::floor(box.lo.y() / h)) - kPad;
  const int i1 = static_cast<int>(std::ceil(box.hi.x() / h)) + kPad;
  const int j1 = static_cast<int>(std::ceil(box.hi.y() / h)) + kPad;
  // Anchoring nodes at integer multiples of h puts axis-aligned boundaries
  // such as x = +-1 exactly on grid lines when 1/h is an integer.
  m.origin = Point(i0 * h, j0 * h);
  m.nx = i1 - i0 + 1;
  m.ny = j1 - j0 + 1;
  const std::size_t total = static_cast<std::size_t>(m.nx) * static_cast<std::size_t>(m.ny);
  m.kind.assign(total, NodeKind::Exterior);
  m.arms.assign(total, {1.0, 1.0, 1.0, 1.0});
  m.area_fraction.assign(total, 0.0);
  m.unknown_of.assign(total, -1);

  for (int j = 0; j < m.ny; ++j) {
    for (int i = 0; i < m.nx; ++i) {
      if (domain.contains(m.position(i, j))) m.kind[m.index(i, j)] = NodeKind::Interior;
    }
  }

  const std::vector<Point> outline = domain.boundary_polyline();
  for (int j = 0; j < m.ny; ++j) {
    for (int i = 0; i < m.nx; ++i) {
      const int node = m.index(i, j);
      if (m.kind[node] == NodeKind::Exterior) continue;
      const Point x = m.position(i, j);
      bool cut = false;
      for (int d = 0; d < 4; ++d) {
        const int ni = i + kSteps[d][0];
        const int nj = j + kSteps[d][1];
        if (m.inside(ni, nj)) continue;
        cut = true;
        const Vec2 dir(kSteps[d][0], kSteps[d][1]);
        const double theta = domain.ray_exit(x, dir) / h;
        m.arms[node][d] = std::clamp(theta, kMinArm, 1.0);
      }
      if (cut) m.kind[node] = NodeKind::BoundaryAdjacent;

      const Point lo = x - Point(0.5 * h, 0.5 * h);
      const Point hi = x + Point(0.5 * h, 0.5 * h);
      const bool cell_inside = domain.contains(lo) && domain.contains(hi) &&
                               domain.contains(Point(lo.x(), hi.y())) &&
                               domain.contains(Point(hi.x(), lo.y()));
      m.area_fraction[node] = cell_inside ? 1.0 : clipped_box_area(outline, lo, hi) / (h * h);
      m.unknown_of[node] = static_cast<int>(m.node_of.size());
      m.node_of.push_back(node);
    }
  }

  if (m.interior_count() < 16) throw GridTooCoarse("fewer than 16 interior nodes");
  return m;
}

}  // namespace torsion
