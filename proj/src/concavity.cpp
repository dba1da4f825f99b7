#include "torsion/concavity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "torsion/errors.hpp"
#include "torsion/format.hpp"

namespace torsion {

namespace {

constexpr double kAlphaLo = 0.45;
constexpr double kAlphaHi = 1.10;
constexpr int kRingSamples = 256;

struct Eig {
  double value;
  Vec2 vector;
};

Eig largest(const Eigen::Matrix2d& m) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  return {es.eigenvalues()(1), es.eigenvectors().col(1)};
}

Eig smallest(const Eigen::Matrix2d& m) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

// Lattice nodes plus rings of points at increasing depth along the inward
// normal, all at least `margin` from the boundary.
std::vector<Point> hessian_samples(const EvaluableField& f, double margin) {
  const Domain& dom = f.domain();
  std::vector<Point> raw;
  if (const GridInterpolant* g = f.interpolant()) {
    const GridMask& m = g->field().mask();
    for (int node : m.node_of) raw.push_back(m.position(node));
  } else {
    const BoundingBox box = dom.bounds();
    const double step = dom.diameter() / 256.0;
    for (double y = box.lo.y() + 0.5 * step; y < box.hi.y(); y += step) {
      for (double x = box.lo.x() + 0.5 * step; x < box.hi.x(); x += step) raw.emplace_back(x, y);
    }
  }
  const auto ring = dom.boundary_samples(kRingSamples);
  const double deepest = 0.5 * dom.inradius();
  for (double depth = margin, k = 1.0; depth < deepest; k *= std::sqrt(2.0), depth = margin * std::round(2.0 * k) / 2.0) {
    for (const auto& b : ring) raw.push_back(b.point - depth * b.outward_normal);
  }
  std::vector<Point> out;
  out.reserve(raw.size());
  for (const Point& x : raw) {
    if (dom.contains(x) && dom.distance_to_boundary(x) >= margin) out.push_back(x);
  }
  return out;
}

struct Violation {
  double amount;
  Vec2 direction;
};

using HessianProbe = std::function<std::optional<Violation>(const Point&)>;
// Returns the midpoint violation in curvature units.
using MidpointProbe = std::function<double(const Point&, const Point&)>;
using PairSource = std::function<bool(std::mt19937_64&, Point&, Point&)>;

ConcavityReport run_tests(const std::vector<Point>& samples, const HessianProbe& hess, int pairs,
                          const PairSource& draw, const MidpointProbe& mid, std::uint64_t seed, double margin,
                          double tol) {
  ConcavityReport r;
  r.margin = margin;
  r.tol = tol;
  double worst = -std::numeric_limits<double>::infinity();
  Witness wit;
  for (const Point& x : samples) {
    const auto v = hess(x);
    if (!v) continue;
    ++r.points_tested;
    if (v->amount > worst) {
      worst = v->amount;
      wit = Witness{Witness::Kind::Hessian, x, v->direction, x, x, v->amount};
    }
  }
  if (r.points_tested == 0) throw EmptySampleSet("no sample points at the requested margin");

  std::mt19937_64 rng(seed);
  for (int k = 0; k < pairs; ++k) {
    Point x;
    Point y;
    if (!draw(rng, x, y)) continue;
    ++r.pairs_tested;
    const double v = mid(x, y);
    if (v > worst) {
      worst = v;
      wit = Witness{Witness::Kind::Midpoint, 0.5 * (x + y), (y - x).normalized(), x, y, v};
    }
  }

  r.worst_violation = std::max(worst, 0.0);
  if (worst <= tol) {
    r.verdict = Verdict::Holds;
  } else {
    r.verdict = worst > 10.0 * tol ? Verdict::Fails : Verdict::Inconclusive;
    r.witness = wit;
  }
  return r;
}

// Uniform pairs in the domain; chords shorter than min_chord are redrawn.
PairSource domain_pairs(const Domain& dom, double min_chord) {
  const BoundingBox box = dom.bounds();
  return [&dom, box, min_chord](std::mt19937_64& rng, Point& x, Point& y) {
    std::uniform_real_distribution<double> ux(box.lo.x(), box.hi.x());
    std::uniform_real_distribution<double> uy(box.lo.y(), box.hi.y());
    auto draw = [&]() {
      for (int t = 0; t < 10'000; ++t) {
        const Point p(ux(rng), uy(rng));
        if (dom.contains(p)) return p;
      }
      throw EmptySampleSet("could not draw interior points");
    };
    for (int t = 0; t < 100; ++t) {
      x = draw();
      y = draw();
      if ((x - y).norm() >= min_chord) return true;
    }
    return false;
  };
}

PairSource ball_pairs(const Point& c, double radius, double min_chord) {
  return [c, radius, min_chord](std::mt19937_64& rng, Point& x, Point& y) {
    std::uniform_real_distribution<double> u(-radius, radius);
    auto draw = [&]() {
      while (true) {
        const Point p = c + Point(u(rng), u(rng));
        if ((p - c).norm() < radius) return p;
      }
    };
    for (int t = 0; t < 100; ++t) {
      x = draw();
      y = draw();
      if ((x - y).norm() >= min_chord) return true;
    }
    return false;
  };
}

double resolved_margin(const EvaluableField& f, const ConcavityOptions& o) {
  const double m = o.margin > 0.0 ? o.margin : default_margin(f);
  if (f.grid_backed() && m < f.jet_margin()) throw InvalidArgument("margin below the grid jet margin of 2h");
  return m;
}

double resolved_tol(const EvaluableField& f, const ConcavityOptions& o) {
  return o.tol > 0.0 ? o.tol : default_tolerance(f);
}

// Convexity test of sqrt(v) given v's value and jet; shared by the global and
// local property (A) checks. `scale` is 2 sqrt(M).
std::optional<Violation> sqrt_convexity(double v, const Vec2& grad, const Eigen::Matrix2d& hess, double scale) {
  if (!(v > 0.0)) return std::nullopt;
  const Eigen::Matrix2d d2w = (2.0 * v * hess - grad * grad.transpose()) / (4.0 * std::pow(v, 1.5));
  const Eig e = smallest(scale * d2w);
  return Violation{-e.value, e.vector};
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Fails:
      return "fails";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

double default_margin(const EvaluableField& f) {
  return f.grid_backed() ? 3.0 * f.spacing() : 1e-3 * f.domain().diameter();
}

double default_tolerance(const EvaluableField& f) {
  const double d = f.domain().diameter();
  return 1e-6 * f.max_value() / (d * d);
}

ConcavityReport is_power_concave(const EvaluableField& f, double alpha, const ConcavityOptions& options) {
  if (!(alpha > 0.0)) throw InvalidArgument("exponent must be positive");
  const double margin = resolved_margin(f, options);
  const double tol = resolved_tol(f, options);
  const double M = f.max_value();
  const Domain& dom = f.domain();

  auto hess = [&](const Point& x) -> std::optional<Violation> {
    const Jet2 j = f.jet(x);
    if (!(j.value > 0.0)) return std::nullopt;
    const Eigen::Matrix2d H =
        std::pow(j.value / M, alpha - 1.0) * ((alpha - 1.0) * j.gradient * j.gradient.transpose() / j.value + j.hessian);
    const Eig e = largest(H);
    return Violation{e.value, e.vector};
  };
  auto g = [&](const Point& x) { return (M / alpha) * std::pow(std::max(f.value(x), 0.0) / M, alpha); };
  auto mid = [&](const Point& x, const Point& y) {
    const double gap = 0.5 * (g(x) + g(y)) - g(0.5 * (x + y));
    return 8.0 * gap / (x - y).squaredNorm();
  };
  return run_tests(hessian_samples(f, margin), hess, options.midpoint_pairs, domain_pairs(dom, 0.01 * dom.diameter()),
                   mid, options.seed, margin, tol);
}

ExponentBracket concavity_exponent(const EvaluableField& f, double bisection_tol, const ConcavityOptions& options) {
  if (!(bisection_tol > 0.0)) throw InvalidArgument("bisection tolerance must be positive");
  auto holds = [&](double a) { return is_power_concave(f, a, options).verdict == Verdict::Holds; };
  if (!holds(kAlphaLo)) throw InconsistentBracket("lower end of the exponent range does not hold");
  if (holds(kAlphaHi)) throw InconsistentBracket("upper end of the exponent range holds");
  ExponentBracket b{kAlphaLo, kAlphaHi, 0};
  while (b.hi - b.lo > bisection_tol) {
    const double mid = 0.5 * (b.lo + b.hi);
    (holds(mid) ? b.lo : b.hi) = mid;
    ++b.steps;
  }
  return b;
}

ConcavityReport property_A_check(const EvaluableField& f, const ConcavityOptions& options) {
  const double margin = resolved_margin(f, options);
  const double tol = resolved_tol(f, options);
  const double M = f.max_value();
  const double scale = 2.0 * std::sqrt(M);
  const Domain& dom = f.domain();
  const Point star = f.argmax();

  std::vector<Point> samples;
  for (const Point& x : hessian_samples(f, margin)) {
    if ((x - star).norm() >= margin) samples.push_back(x);
  }
  auto hess = [&](const Point& x) {
    const Jet2 j = f.jet(x);
    return sqrt_convexity(M - j.value, -j.gradient, -j.hessian, scale);
  };
  auto w = [&](const Point& x) { return std::sqrt(std::max(M - f.value(x), 0.0)); };
  auto mid = [&](const Point& x, const Point& y) {
    const double gap = w(0.5 * (x + y)) - 0.5 * (w(x) + w(y));
    return 8.0 * scale * gap / (x - y).squaredNorm();
  };
  return run_tests(samples, hess, options.midpoint_pairs, domain_pairs(dom, 0.01 * dom.diameter()), mid,
                   options.seed, margin, tol);
}

ConcavityReport local_property_A_check(const EvaluableField& f, const Point& x0, double radius,
                                       const ConcavityOptions& options) {
  if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
  const Domain& dom = f.domain();
  if (!dom.contains(x0) || dom.distance_to_boundary(x0) < radius + f.jet_margin()) {
    throw OutOfDomain("ball is not contained in the domain");
  }
  const double tol = resolved_tol(f, options);
  const double scale = 2.0 * std::sqrt(f.max_value());
  const Jet2 j0 = f.jet(x0);

  auto vjet = [&](const Point& x) {
    const Jet2 j = f.jet(x);
    return Jet2{j0.value + j0.gradient.dot(x - x0) - j.value, j0.gradient - j.gradient, -j.hessian};
  };
  // Polar grid, skipping the cone point x0.
  std::vector<Point> samples;
  constexpr int kRadii = 16;
  constexpr int kAngles = 64;
  const double r0 = radius / 16.0;
  for (int i = 0; i < kRadii; ++i) {
    const double r = r0 * std::pow(radius / r0, i / (kRadii - 1.0)) * (1.0 - 1e-9);
    for (int k = 0; k < kAngles; ++k) {
      const double t = 2.0 * std::acos(-1.0) * (k + 0.5) / kAngles;
      samples.push_back(x0 + r * Vec2(std::cos(t), std::sin(t)));
    }
  }
  auto hess = [&](const Point& x) -> std::optional<Violation> {
    const Jet2 v = vjet(x);
    const double r2 = (x - x0).squaredNorm();
    // v should be nonnegative; measure a negative value as the curvature
    // that would produce it over the distance from x0.
    if (v.value < 0.0) return Violation{-2.0 * v.value / r2, (x - x0).normalized()};
    return sqrt_convexity(v.value, v.gradient, v.hessian, scale);
  };
  auto w = [&](const Point& x) {
    return std::sqrt(std::max(j0.value + j0.gradient.dot(x - x0) - f.value(x), 0.0));
  };
  auto mid = [&](const Point& x, const Point& y) {
    const double gap = w(0.5 * (x + y)) - 0.5 * (w(x) + w(y));
    return 8.0 * scale * gap / (x - y).squaredNorm();
  };
  ConcavityReport r = run_tests(samples, hess, options.midpoint_pairs, ball_pairs(x0, radius, 0.1 * radius), mid,
                                options.seed, r0, tol);
  if (r.witness && r.witness->kind == Witness::Kind::Hessian && vjet(r.witness->point).value < 0.0) {
    r.witness->kind = Witness::Kind::Negative;
  }
  return r;
}

double excess_laplacian_power(const EvaluableField& f, double alpha, const Point& x) {
  const Jet2 j = f.jet(x);
  if (!(j.value > 0.0)) throw InvalidArgument("field must be positive at the evaluation point");
  return alpha * std::pow(j.value, alpha - 2.0) * ((alpha - 1.0) * j.gradient.squaredNorm() - j.value);
}

namespace {

LevelSetBound bound_from_lattice(const ScalarLattice& lat, double alpha, double epsilon) {
  const std::vector<Point> poly = marching_level_set(lat, epsilon);
  const PolygonMetrics pm = polygon_metrics(poly);
  LevelSetBound b;
  b.alpha = alpha;
  b.epsilon = epsilon;
  b.volume = pm.area;
  b.perimeter = pm.perimeter;
  b.bracket = (alpha - 1.0) * pm.area * pm.area / pm.perimeter - epsilon * pm.perimeter;
  b.convex = is_convex_polyline(poly);
  return b;
}

void check_bound_args(double alpha, double epsilon, double M) {
  if (!(alpha > 1.0)) throw InvalidArgument("level-set bound needs alpha > 1");
  if (!(epsilon > 0.0) || !(epsilon < 0.5 * M)) throw InvalidArgument("epsilon must lie in (0, M/2)");
}

}  // namespace

LevelSetBound level_set_bound_check(const SolveResult& result, double alpha, double epsilon) {
  check_bound_args(alpha, epsilon, result.M);
  const GridInterpolant interp(result.field);
  return bound_from_lattice(extended_lattice(interp), alpha, epsilon);
}

LevelSetBound level_set_bound_check(const SmoothField& field, double alpha, double epsilon, double h) {
  const EvaluableField f = EvaluableField::analytic(field);
  check_bound_args(alpha, epsilon, f.max_value());
  return bound_from_lattice(sample_lattice(field, h), alpha, epsilon);
}

GradientStats boundary_gradient_stats(const EvaluableField& f, int n_samples) {
  const Domain& dom = f.domain();
  const double s0 = f.grid_backed() ? 4.0 * f.spacing() : dom.diameter() / 256.0;
  GradientStats st;
  st.min = std::numeric_limits<double>::infinity();
  st.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& b : dom.boundary_samples(n_samples)) {
    const Vec2 n = -b.outward_normal;
    // Keep both probes inside: the inward chord can be short near corners.
    const double chord = dom.ray_exit(b.point + 1e-9 * dom.diameter() * n, n);
    const double s = std::min(s0, 0.25 * chord);
    const double g = (4.0 * f.value(b.point + s * n) - f.value(b.point + 2.0 * s * n)) / (2.0 * s);
    st.min = std::min(st.min, g);
    st.max = std::max(st.max, g);
    sum += g;
    ++st.samples;
  }
  st.mean = sum / static_cast<double>(st.samples);
  if (st.mean == 0.0) throw ZeroDenominator("boundary gradient mean vanishes");
  st.spread = (st.max - st.min) / st.mean;
  return st;
}

GradientStats boundary_gradient_stats(const SolveResult& result, int n_samples) {
  return boundary_gradient_stats(EvaluableField::from_solve(result), n_samples);
}

namespace {

nlohmann::json point_json(const Point& p) { return {round12(p.x()), round12(p.y())}; }

}  // namespace

nlohmann::json to_json(const ConcavityReport& r) {
  nlohmann::json j{{"verdict", to_string(r.verdict)},
                   {"points_tested", r.points_tested},
                   {"pairs_tested", r.pairs_tested},
                   {"margin", round12(r.margin)},
                   {"tol", round12(r.tol)},
                   {"worst_violation", round12(r.worst_violation)}};
  if (r.witness) {
    const Witness& w = *r.witness;
    nlohmann::json wj{{"point", point_json(w.point)}, {"violation", round12(w.violation)}};
    switch (w.kind) {
      case Witness::Kind::Hessian:
        wj["kind"] = "hessian";
        wj["direction"] = point_json(w.direction);
        break;
      case Witness::Kind::Negative:
        wj["kind"] = "negative";
        break;
      case Witness::Kind::Midpoint:
        wj["kind"] = "midpoint";
        wj["x"] = point_json(w.x);
        wj["y"] = point_json(w.y);
        break;
    }
    j["witness"] = wj;
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

nlohmann::json to_json(const ExponentBracket& b) {
  return {{"alpha_lo", round12(b.lo)}, {"alpha_hi", round12(b.hi)}, {"steps", b.steps}};
}

nlohmann::json to_json(const LevelSetBound& b) {
  return {{"alpha", round12(b.alpha)},         {"epsilon", round12(b.epsilon)},
          {"volume", round12(b.volume)},       {"perimeter", round12(b.perimeter)},
          {"bracket", round12(b.bracket)},     {"convex", b.convex}};
}

nlohmann::json to_json(const GradientStats& s) {
  return {{"min", round12(s.min)},       {"max", round12(s.max)},     {"mean", round12(s.mean)},
          {"spread", round12(s.spread)}, {"samples", s.samples}};
}

}  // namespace torsion
