#include "torsion/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "torsion/errors.hpp"

namespace torsion {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kGhostLayers = 2;
// Below this arm the nearest unknown is too close to the boundary to anchor
// a stable quadratic; the next two unknowns are used instead.
constexpr double kShortArm = 0.05;

// Lagrange polynomial through (xs[k], ys[k]) evaluated at s.
double lagrange(const double* xs, const double* ys, int n, double s) {
  double out = 0.0;
  for (int k = 0; k < n; ++k) {
    double w = 1.0;
    for (int m = 0; m < n; ++m) {
      if (m != k) w *= (s - xs[m]) / (xs[k] - xs[m]);
    }
    out += w * ys[k];
  }
  return out;
}

// Extends a run of unknowns past its end. `values[k]` is the unknown k steps
// back from the end, `arm` the fractional distance from the end node to the
// boundary. Returns the ghost values 1..kGhostLayers steps beyond the end.
std::array<double, kGhostLayers> extrapolate(const std::vector<double>& values, double arm) {
  double xs[3];
  double ys[3];
  int n = 0;
  xs[n] = arm;
  ys[n++] = 0.0;
  const int avail = static_cast<int>(values.size());
  const int skip = (arm < kShortArm && avail >= 3) ? 1 : 0;
  for (int k = skip; k < avail && n < 3; ++k) {
    xs[n] = -static_cast<double>(k);
    ys[n++] = values[static_cast<std::size_t>(k)];
  }
  std::array<double, kGhostLayers> out{};
  for (int g = 0; g < kGhostLayers; ++g) out[static_cast<std::size_t>(g)] = lagrange(xs, ys, n, g + 1.0);
  return out;
}

// Fourth-order central first difference where the stencil is finite,
// second-order otherwise, NaN when neither is available.
double central(const std::vector<double>& f, int node, int stride, int pos, int len, double h) {
  auto at = [&](int k) -> double {
    const int p = pos + k;
    if (p < 0 || p >= len) return kNaN;
    return f[static_cast<std::size_t>(node + k * stride)];
  };
  const double m2 = at(-2);
  const double m1 = at(-1);
  const double p1 = at(1);
  const double p2 = at(2);
  if (std::isfinite(m2) && std::isfinite(m1) && std::isfinite(p1) && std::isfinite(p2)) {
    return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
  }
  if (std::isfinite(m1) && std::isfinite(p1)) return (p1 - m1) / (2.0 * h);
  return kNaN;
}

const Eigen::Matrix4d& hermite_matrix() {
  static const Eigen::Matrix4d m = (Eigen::Matrix4d() << 1, 0, 0, 0, 0, 0, 1, 0, -3, 3, -2, -1, 2, -2, 1, 1)
                                       .finished();
  return m;
}

Eigen::Matrix2d symmetric(double xx, double xy, double yy) {
  Eigen::Matrix2d m;
  m << xx, xy, xy, yy;
  return m;
}

Jet2 to_jet2(const Jet& j) {
  Jet2 out;
  out.value = j.value;
  out.gradient = Vec2(j.gradient(0), j.gradient(1));
  out.hessian = symmetric(j.hessian(0, 0), 0.5 * (j.hessian(0, 1) + j.hessian(1, 0)), j.hessian(1, 1));
  return out;
}

}  // namespace

GridInterpolant::GridInterpolant(GridField field) : field_(std::move(field)) {
  const GridMask& m = field_.mask();
  const std::size_t total = m.kind.size();
  f_.assign(total, kNaN);
  for (int node : m.node_of) f_[static_cast<std::size_t>(node)] = field_.at(node);

  std::vector<double> sum(total, 0.0);
  std::vector<int> count(total, 0);
  auto deposit = [&](int i, int j, double v) {
    if (i < 0 || j < 0 || i >= m.nx || j >= m.ny) return;
    const int node = m.index(i, j);
    if (m.kind[node] != NodeKind::Exterior) return;
    sum[static_cast<std::size_t>(node)] += v;
    ++count[static_cast<std::size_t>(node)];
  };

  // Rows, then columns. Each maximal run of unknowns is extended at both ends.
  for (int pass = 0; pass < 2; ++pass) {
    const int lines = pass == 0 ? m.ny : m.nx;
    const int len = pass == 0 ? m.nx : m.ny;
    auto node_at = [&](int line, int pos) { return pass == 0 ? m.index(pos, line) : m.index(line, pos); };
    auto ij = [&](int line, int pos) { return pass == 0 ? std::pair{pos, line} : std::pair{line, pos}; };
    const int fwd = pass == 0 ? East : North;
    const int bwd = pass == 0 ? West : South;
    for (int line = 0; line < lines; ++line) {
      int pos = 0;
      while (pos < len) {
        if (m.kind[node_at(line, pos)] == NodeKind::Exterior) {
          ++pos;
          continue;
        }
        const int a = pos;
        while (pos < len && m.kind[node_at(line, pos)] != NodeKind::Exterior) ++pos;
        const int b = pos - 1;
        std::vector<double> tail;
        for (int k = b; k >= a && static_cast<int>(tail.size()) < 3; --k) tail.push_back(field_.at(node_at(line, k)));
        const auto up = extrapolate(tail, m.arms[node_at(line, b)][fwd]);
        for (int g = 0; g < kGhostLayers; ++g) {
          const auto [i, j] = ij(line, b + 1 + g);
          deposit(i, j, up[static_cast<std::size_t>(g)]);
        }
        std::vector<double> head;
        for (int k = a; k <= b && static_cast<int>(head.size()) < 3; ++k) head.push_back(field_.at(node_at(line, k)));
        const auto down = extrapolate(head, m.arms[node_at(line, a)][bwd]);
        for (int g = 0; g < kGhostLayers; ++g) {
          const auto [i, j] = ij(line, a - 1 - g);
          deposit(i, j, down[static_cast<std::size_t>(g)]);
        }
      }
    }
  }
  for (std::size_t k = 0; k < total; ++k) {
    if (count[k] > 0) f_[k] = sum[k] / count[k];
  }

  const double h = m.h;
  fx_.assign(total, kNaN);
  fy_.assign(total, kNaN);
  fxy_.assign(total, kNaN);
  for (int j = 0; j < m.ny; ++j) {
    for (int i = 0; i < m.nx; ++i) {
      const int node = m.index(i, j);
      if (!std::isfinite(f_[static_cast<std::size_t>(node)])) continue;
      fx_[static_cast<std::size_t>(node)] = central(f_, node, 1, i, m.nx, h);
      fy_[static_cast<std::size_t>(node)] = central(f_, node, m.nx, j, m.ny, h);
    }
  }
  for (int j = 0; j < m.ny; ++j) {
    for (int i = 0; i < m.nx; ++i) {
      const int node = m.index(i, j);
      if (!std::isfinite(fy_[static_cast<std::size_t>(node)])) continue;
      fxy_[static_cast<std::size_t>(node)] = central(fy_, node, 1, i, m.nx, h);
    }
  }
}

bool GridInterpolant::cubic_ready(int node) const {
  const auto k = static_cast<std::size_t>(node);
  return std::isfinite(f_[k]) && std::isfinite(fx_[k]) && std::isfinite(fy_[k]) && std::isfinite(fxy_[k]);
}

Jet2 GridInterpolant::jet(const Point& x) const {
  const GridMask& m = field_.mask();
  const double h = m.h;
  const Point local = (x - m.origin) / h;
  const int ci = std::clamp(static_cast<int>(std::floor(local.x())), 0, m.nx - 2);
  const int cj = std::clamp(static_cast<int>(std::floor(local.y())), 0, m.ny - 2);
  const double s = local.x() - ci;
  const double t = local.y() - cj;
  const int n00 = m.index(ci, cj);
  const int n10 = m.index(ci + 1, cj);
  const int n01 = m.index(ci, cj + 1);
  const int n11 = m.index(ci + 1, cj + 1);

  Jet2 out;
  if (cubic_ready(n00) && cubic_ready(n10) && cubic_ready(n01) && cubic_ready(n11)) {
    auto F = [&](const std::vector<double>& g, int node, double scale) {
      return g[static_cast<std::size_t>(node)] * scale;
    };
    Eigen::Matrix4d Fm;
    Fm << F(f_, n00, 1), F(f_, n01, 1), F(fy_, n00, h), F(fy_, n01, h),  //
        F(f_, n10, 1), F(f_, n11, 1), F(fy_, n10, h), F(fy_, n11, h),    //
        F(fx_, n00, h), F(fx_, n01, h), F(fxy_, n00, h * h), F(fxy_, n01, h * h),  //
        F(fx_, n10, h), F(fx_, n11, h), F(fxy_, n10, h * h), F(fxy_, n11, h * h);
    const Eigen::Matrix4d& M = hermite_matrix();
    const Eigen::Matrix4d C = M * Fm * M.transpose();
    const Eigen::Vector4d S(1.0, s, s * s, s * s * s);
    const Eigen::Vector4d dS(0.0, 1.0, 2.0 * s, 3.0 * s * s);
    const Eigen::Vector4d ddS(0.0, 0.0, 2.0, 6.0 * s);
    const Eigen::Vector4d T(1.0, t, t * t, t * t * t);
    const Eigen::Vector4d dT(0.0, 1.0, 2.0 * t, 3.0 * t * t);
    const Eigen::Vector4d ddT(0.0, 0.0, 2.0, 6.0 * t);
    out.value = S.dot(C * T);
    out.gradient = Vec2(dS.dot(C * T), S.dot(C * dT)) / h;
    out.hessian = symmetric(ddS.dot(C * T), dS.dot(C * dT), S.dot(C * ddT)) / (h * h);
    return out;
  }

  auto val = [&](int node) {
    const double v = f_[static_cast<std::size_t>(node)];
    return std::isfinite(v) ? v : 0.0;
  };
  const double f00 = val(n00);
  const double f10 = val(n10);
  const double f01 = val(n01);
  const double f11 = val(n11);
  out.value = f00 * (1 - s) * (1 - t) + f10 * s * (1 - t) + f01 * (1 - s) * t + f11 * s * t;
  out.gradient = Vec2((f10 - f00) * (1 - t) + (f11 - f01) * t, (f01 - f00) * (1 - s) + (f11 - f10) * s) / h;
  out.hessian = symmetric(0.0, (f11 - f10 - f01 + f00) / (h * h), 0.0);
  return out;
}

double GridInterpolant::value(const Point& x) const { return jet(x).value; }

EvaluableField::EvaluableField(std::variant<SmoothField, Grid> source, Domain domain)
    : source_(std::move(source)), domain_(std::move(domain)) {}

EvaluableField EvaluableField::analytic(SmoothField field) {
  if (field.dimension() != 2 || !field.domain()) {
    throw InvalidArgument("analytic fields must be planar with a natural domain");
  }
  Domain domain = *field.domain();
  EvaluableField out(std::move(field), domain);
  // Coarse lattice search, then Newton.
  const BoundingBox box = out.domain_.bounds();
  Point best = out.domain_.centroid();
  double best_v = out.domain_.contains(best) ? out.raw_jet(best).value : -std::numeric_limits<double>::infinity();
  constexpr int kN = 64;
  for (int j = 1; j < kN; ++j) {
    for (int i = 1; i < kN; ++i) {
      const Point x = box.lo + Point((box.hi.x() - box.lo.x()) * i / kN, (box.hi.y() - box.lo.y()) * j / kN);
      if (!out.domain_.contains(x)) continue;
      const double v = out.raw_jet(x).value;
      if (v > best_v) {
        best_v = v;
        best = x;
      }
    }
  }
  out.locate_max(best);
  return out;
}

EvaluableField EvaluableField::from_solve(const SolveResult& result) {
  auto interp = std::make_shared<const GridInterpolant>(result.field);
  EvaluableField out(Grid(interp), result.field.mask().domain);
  out.locate_max(result.argmax);
  return out;
}

EvaluableField EvaluableField::from_grid(GridField field) {
  const RefinedMax peak = refine_argmax(field);
  auto interp = std::make_shared<const GridInterpolant>(std::move(field));
  EvaluableField out(Grid(interp), interp->field().mask().domain);
  out.locate_max(peak.point);
  return out;
}

void EvaluableField::locate_max(const Point& start) {
  const double scale = domain_.diameter();
  const double h = spacing();
  Point x = start;
  for (int it = 0; it < 50; ++it) {
    const Jet2 j = raw_jet(x);
    if (j.hessian.determinant() <= 0.0 || j.hessian.trace() >= 0.0) break;
    const Vec2 step = -j.hessian.ldlt().solve(j.gradient);
    const Point next = x + step;
    if (!domain_.contains(next)) break;
    // Grid surfaces are only C^1; stay near the node-level estimate.
    if (h > 0.0 && (next - start).norm() > 1.5 * h) break;
    x = next;
    if (step.norm() < 1e-15 * scale) break;
  }
  argmax_ = x;
  max_value_ = raw_jet(x).value;
}

double EvaluableField::spacing() const {
  if (const auto* g = std::get_if<Grid>(&source_)) return (*g)->field().mask().h;
  return 0.0;
}

const GridInterpolant* EvaluableField::interpolant() const {
  if (const auto* g = std::get_if<Grid>(&source_)) return g->get();
  return nullptr;
}

Jet2 EvaluableField::raw_jet(const Point& x) const {
  if (const auto* s = std::get_if<SmoothField>(&source_)) return to_jet2(s->jet(Eigen::VectorXd(x)));
  return std::get<Grid>(source_)->jet(x);
}

Jet2 EvaluableField::jet(const Point& x) const {
  if (!domain_.contains(x)) throw OutOfDomain("point lies outside the domain");
  if (grid_backed() && domain_.distance_to_boundary(x) < jet_margin() * (1.0 - 1e-12)) {
    throw TooCloseToBoundary("grid-backed jets need a 2h margin from the boundary");
  }
  return raw_jet(x);
}

double EvaluableField::value(const Point& x) const {
  if (!domain_.contains(x)) throw OutOfDomain("point lies outside the domain");
  if (const auto* s = std::get_if<SmoothField>(&source_)) return s->value(x);
  return std::get<Grid>(source_)->value(x);
}

Jet2 eval_jet(const EvaluableField& f, const Point& x) { return f.jet(x); }

RadialJet radial_jet(const EvaluableField& f, const Point& base, const Vec2& xi, double r) {
  const double norm = xi.norm();
  if (!(norm > 0.0)) throw InvalidArgument("direction must be non-zero");
  const Vec2 e = xi / norm;
  const Jet2 j = f.jet(base + r * e);
  return {f.max_value() - j.value, -j.gradient.dot(e), -e.dot(j.hessian * e)};
}

ScalarLattice extended_lattice(const GridInterpolant& interp) {
  const GridMask& m = interp.field().mask();
  ScalarLattice lat{m.origin, m.h, m.nx, m.ny, interp.extended_values()};
  double peak = 0.0;
  for (double v : lat.values) {
    if (std::isfinite(v)) peak = std::max(peak, v);
  }
  for (double& v : lat.values) {
    if (!std::isfinite(v)) v = -peak;
  }
  return lat;
}

}  // namespace torsion
