#include "torsion/level_set.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>

#include "torsion/closed_forms.hpp"
#include "torsion/errors.hpp"

namespace torsion {

ScalarLattice sample_lattice(const SmoothField& field, double h) {
  if (field.dimension() != 2 || !field.domain()) {
    throw InvalidArgument("lattice sampling needs a planar field with a natural domain");
  }
  if (!(h > 0.0)) throw InvalidArgument("lattice spacing must be positive");
  const Domain& domain = *field.domain();
  const BoundingBox box = domain.bounds();
  constexpr int kPad = 3;
  const int i0 = static_cast<int>(std::floor(box.lo.x() / h)) - kPad;
  const int j0 = static_cast<int>(std::floor(box.lo.y() / h)) - kPad;
  const int i1 = static_cast<int>(std::ceil(box.hi.x() / h)) + kPad;
  const int j1 = static_cast<int>(std::ceil(box.hi.y() / h)) + kPad;
  ScalarLattice lat{Point(i0 * h, j0 * h), h, i1 - i0 + 1, j1 - j0 + 1, {}};
  lat.values.resize(static_cast<std::size_t>(lat.nx) * lat.ny);
  for (int j = 0; j < lat.ny; ++j) {
    for (int i = 0; i < lat.nx; ++i) {
      const Point x = lat.position(i, j);
      double v = field.value(x);
      if (!domain.contains(x) && v >= 0.0) v = -1e-300;
      lat.values[static_cast<std::size_t>(j) * lat.nx + i] = v;
    }
  }
  return lat;
}

namespace {

struct Segment {
  long e0;
  long e1;
};

}  // namespace

std::vector<Point> marching_level_set(const ScalarLattice& lat, double c) {
  if (lat.nx < 2 || lat.ny < 2) throw InvalidArgument("lattice too small");
  const double vmax = *std::max_element(lat.values.begin(), lat.values.end());
  if (!(c > 0.0) || !(c < vmax)) throw EmptyLevelSet("level must lie strictly between 0 and the maximum");
  for (int i = 0; i < lat.nx; ++i) {
    if (lat.at(i, 0) >= c || lat.at(i, lat.ny - 1) >= c) {
      throw LevelSetTouchesBoundary("level set reaches the lattice edge");
    }
  }
  for (int j = 0; j < lat.ny; ++j) {
    if (lat.at(0, j) >= c || lat.at(lat.nx - 1, j) >= c) {
      throw LevelSetTouchesBoundary("level set reaches the lattice edge");
    }
  }

  const long nx = lat.nx;
  auto h_edge = [nx](int i, int j) { return 2 * (j * nx + i); };
  auto v_edge = [nx](int i, int j) { return 2 * (j * nx + i) + 1; };
  auto edge_point = [&](long id) {
    const long node = id / 2;
    const int i = static_cast<int>(node % nx);
    const int j = static_cast<int>(node / nx);
    const int i2 = (id % 2 == 0) ? i + 1 : i;
    const int j2 = (id % 2 == 0) ? j : j + 1;
    const double fa = lat.at(i, j);
    const double fb = lat.at(i2, j2);
    const double t = (c - fa) / (fb - fa);
    return Point(lat.position(i, j) + t * (lat.position(i2, j2) - lat.position(i, j)));
  };

  std::vector<Segment> segs;
  for (int j = 0; j + 1 < lat.ny; ++j) {
    for (int i = 0; i + 1 < lat.nx; ++i) {
      const std::array<double, 4> f{lat.at(i, j), lat.at(i + 1, j), lat.at(i + 1, j + 1), lat.at(i, j + 1)};
      int code = 0;
      for (int k = 0; k < 4; ++k) {
        if (f[k] > c) code |= 1 << k;
      }
      if (code == 0 || code == 15) continue;
      const long bottom = h_edge(i, j);
      const long right = v_edge(i + 1, j);
      const long top = h_edge(i, j + 1);
      const long left = v_edge(i, j);
      if (code == 5 || code == 10) {
        const bool centre_above = 0.25 * (f[0] + f[1] + f[2] + f[3]) > c;
        // Cut off the corners that are isolated from their diagonal partner.
        const bool cut_v1_v3 = (code == 5) == centre_above;
        if (cut_v1_v3) {
          segs.push_back({bottom, right});
          segs.push_back({top, left});
        } else {
          segs.push_back({left, bottom});
          segs.push_back({right, top});
        }
        continue;
      }
      std::array<long, 2> hits{};
      int n = 0;
      const std::array<long, 4> edges{bottom, right, top, left};
      // Edge k joins corner k and corner (k + 1) % 4.
      for (int k = 0; k < 4; ++k) {
        const bool a = (code >> k) & 1;
        const bool b = (code >> ((k + 1) % 4)) & 1;
        if (a != b) hits[static_cast<std::size_t>(n++)] = edges[static_cast<std::size_t>(k)];
      }
      segs.push_back({hits[0], hits[1]});
    }
  }
  if (segs.empty()) throw EmptyLevelSet("no crossings at this level");

  std::unordered_map<long, std::array<int, 2>> at_edge;
  at_edge.reserve(segs.size() * 2);
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    for (long e : {segs[static_cast<std::size_t>(s)].e0, segs[static_cast<std::size_t>(s)].e1}) {
      auto [it, fresh] = at_edge.try_emplace(e, std::array<int, 2>{s, -1});
      if (!fresh) it->second[1] = s;
    }
  }

  std::vector<bool> used(segs.size(), false);
  std::vector<Point> best;
  double best_area = -1.0;
  for (std::size_t start = 0; start < segs.size(); ++start) {
    if (used[start]) continue;
    std::vector<Point> loop;
    std::size_t s = start;
    long entry = segs[s].e0;
    bool closed = false;
    while (true) {
      used[s] = true;
      loop.push_back(edge_point(entry));
      const long exit = segs[s].e0 == entry ? segs[s].e1 : segs[s].e0;
      const auto& pair = at_edge.at(exit);
      const int next = pair[0] == static_cast<int>(s) ? pair[1] : pair[0];
      if (next < 0) break;
      entry = exit;
      s = static_cast<std::size_t>(next);
      if (s == start) {
        closed = true;
        break;
      }
      if (used[s]) break;
    }
    if (!closed || loop.size() < 3) continue;
    const double a = std::abs(signed_area(loop));
    if (a > best_area) {
      best_area = a;
      best = std::move(loop);
    }
  }
  if (best.empty()) throw EmptyLevelSet("no closed level curve found");
  if (signed_area(best) < 0.0) std::reverse(best.begin(), best.end());
  return best;
}

}  // namespace torsion
