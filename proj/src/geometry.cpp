#include "torsion/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "torsion/errors.hpp"

namespace torsion {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

Vec2 outward_normal(const Point& a, const Point& b) {
  Vec2 d = b - a;
  return Vec2(d.y(), -d.x()).normalized();
}

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

// Eberly, "Distance from a Point to an Ellipse, an Ellipsoid, or a
// Hyperellipsoid". Requires e0 >= e1 > 0 and y0, y1 >= 0.
double robust_root(double r0, double z0, double z1, double g) {
  const double n0 = r0 * z0;
  double s0 = z1 - 1.0;
  double s1 = g < 0.0 ? 0.0 : std::hypot(n0, z1) - 1.0;
  double s = 0.0;
  for (int i = 0; i < 1100; ++i) {
    s = 0.5 * (s0 + s1);
    if (s == s0 || s == s1) break;
    const double ratio0 = n0 / (s + r0);
    const double ratio1 = z1 / (s + 1.0);
    g = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
    if (g > 0.0) {
      s0 = s;
    } else if (g < 0.0) {
      s1 = s;
    } else {
      break;
    }
  }
  return s;
}

double ellipse_quadrant_distance(double e0, double e1, double y0, double y1) {
  if (y1 > 0.0) {
    if (y0 > 0.0) {
      const double z0 = y0 / e0;
      const double z1 = y1 / e1;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g == 0.0) return 0.0;
      const double r0 = (e0 / e1) * (e0 / e1);
      const double sbar = robust_root(r0, z0, z1, g);
      const double x0 = r0 * y0 / (sbar + r0);
      const double x1 = y1 / (sbar + 1.0);
      return std::hypot(x0 - y0, x1 - y1);
    }
    return std::abs(y1 - e1);
  }
  const double numer0 = e0 * y0;
  const double denom0 = e0 * e0 - e1 * e1;
  if (numer0 < denom0) {
    const double xde0 = numer0 / denom0;
    const double x0 = e0 * xde0;
    const double x1 = e1 * std::sqrt(1.0 - xde0 * xde0);
    return std::hypot(x0 - y0, x1);
  }
  return std::abs(y0 - e0);
}

double ellipse_distance(const Ellipse& e, const Point& x) {
  const Vec2 s = e.semi_axes();
  double y0 = std::abs(x.x() - e.center.x());
  double y1 = std::abs(x.y() - e.center.y());
  double e0 = s.x();
  double e1 = s.y();
  if (e0 < e1) {
    std::swap(e0, e1);
    std::swap(y0, y1);
  }
  return ellipse_quadrant_distance(e0, e1, y0, y1);
}

// Smallest positive t with q(p + t d) = R^2 for the quadratic form
// q(y) = sum a_i (y_i - c_i)^2.
double conic_exit(const Point& c, const Vec2& a, double R, const Point& p, const Vec2& d) {
  const Vec2 y = p - c;
  const double A = a.x() * d.x() * d.x() + a.y() * d.y() * d.y();
  const double B = 2.0 * (a.x() * y.x() * d.x() + a.y() * y.y() * d.y());
  const double C = a.x() * y.x() * y.x() + a.y() * y.y() * y.y() - R * R;
  const double disc = std::max(B * B - 4.0 * A * C, 0.0);
  // C < 0 for interior points, so the roots have opposite signs; use the
  // cancellation-free form of the positive one.
  const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
  const double t1 = q / A;
  const double t2 = q != 0.0 ? C / q : 0.0;
  return std::max(t1, t2);
}

bool polyline_contains_winding(std::span<const Point> poly, const Point& x) {
  int winding = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    const double side = cross(b - a, x - a);
    if (a.y() <= x.y()) {
      if (b.y() > x.y() && side > 0.0) ++winding;
    } else {
      if (b.y() <= x.y() && side < 0.0) --winding;
    }
  }
  return winding != 0;
}

bool convex_contains(std::span<const Point> ccw, const Point& x) {
  const std::size_t n = ccw.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ccw[i];
    const Point& b = ccw[(i + 1) % n];
    if (cross(b - a, x - a) <= 0.0) return false;
  }
  return true;
}

double polyline_ray_exit(std::span<const Point> poly, const Point& p, const Vec2& d) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    const Vec2 e = b - a;
    const double denom = cross(d, e);
    if (denom == 0.0) continue;
    const Vec2 ap = a - p;
    const double t = cross(ap, e) / denom;
    const double s = cross(ap, d) / denom;
    if (t > 0.0 && s >= 0.0 && s <= 1.0) best = std::min(best, t);
  }
  return best;
}

double polyline_distance(std::span<const Point> poly, const Point& x) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, segment_distance(x, poly[i], poly[(i + 1) % n]));
  }
  return best;
}

double polyline_diameter(std::span<const Point> poly) {
  double best = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    for (std::size_t j = i + 1; j < poly.size(); ++j) {
      best = std::max(best, (poly[i] - poly[j]).squaredNorm());
    }
  }
  return std::sqrt(best);
}

double polyline_perimeter(std::span<const Point> poly) {
  double p = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) p += (poly[(i + 1) % poly.size()] - poly[i]).norm();
  return p;
}

Point polyline_centroid(std::span<const Point> poly) {
  double a2 = 0.0;
  Point c(0.0, 0.0);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    const double w = cross(p, q);
    a2 += w;
    c += w * (p + q);
  }
  return c / (3.0 * a2);
}

std::vector<BoundarySample> polyline_samples(std::span<const Point> poly, int n) {
  std::vector<double> cum(poly.size() + 1, 0.0);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    cum[i + 1] = cum[i] + (poly[(i + 1) % poly.size()] - poly[i]).norm();
  }
  const double total = cum.back();
  std::vector<BoundarySample> out;
  out.reserve(static_cast<std::size_t>(n));
  std::size_t edge = 0;
  for (int k = 0; k < n; ++k) {
    const double s = (k + 0.5) * total / n;
    while (edge + 1 < poly.size() && cum[edge + 1] < s) ++edge;
    const Point& a = poly[edge];
    const Point& b = poly[(edge + 1) % poly.size()];
    const double len = cum[edge + 1] - cum[edge];
    const double t = len > 0.0 ? (s - cum[edge]) / len : 0.0;
    out.push_back({a + t * (b - a), outward_normal(a, b)});
  }
  return out;
}

std::vector<Point> conic_polyline(const Point& c, const Vec2& semi, int n) {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * kPi * k / n;
    out.emplace_back(c.x() + semi.x() * std::cos(t), c.y() + semi.y() * std::sin(t));
  }
  return out;
}

// Largest inscribed disk of a convex CCW polygon by pattern search on the
// concave function x -> min edge-line distance.
double convex_inradius(std::span<const Point> ccw) {
  auto depth = [&](const Point& x) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ccw.size(); ++i) {
      const Point& a = ccw[i];
      const Vec2 n = outward_normal(a, ccw[(i + 1) % ccw.size()]);
      d = std::min(d, n.dot(a - x));
    }
    return d;
  };
  Point x = polyline_centroid(ccw);
  double best = depth(x);
  double step = 0.25 * polyline_diameter(ccw);
  while (step > 1e-12 * (1.0 + x.norm())) {
    bool improved = false;
    for (int k = 0; k < 8; ++k) {
      const double t = kPi * k / 4.0;
      const Point y = x + step * Vec2(std::cos(t), std::sin(t));
      const double dy = depth(y);
      if (dy > best) {
        best = dy;
        x = y;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace

Domain Domain::disk(const Point& center, double R) {
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidDomain("disk radius must be positive");
  return Domain(Disk{center, R});
}

Domain Domain::ellipse(const Point& center, const Vec2& a, double R) {
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidDomain("ellipse radius must be positive");
  if (!(a.x() > 0.0) || !(a.y() > 0.0)) throw InvalidDomain("ellipse coefficients must be positive");
  if (std::abs(a.sum() - 2.0) > 1e-12) throw InvalidDomain("ellipse coefficients must sum to 2");
  return Domain(Ellipse{center, a, R});
}

Domain Domain::polygon(std::vector<Point> vertices) {
  if (vertices.size() < 3) throw InvalidDomain("polygon needs at least 3 vertices");
  const double area = signed_area(vertices);
  if (area == 0.0) throw InvalidDomain("polygon has zero area");
  if (area < 0.0) std::reverse(vertices.begin(), vertices.end());
  if (!is_convex_polyline(vertices)) throw InvalidDomain("polygon is not convex");
  return Domain(ConvexPolygon{std::move(vertices)});
}

Domain Domain::level_set(std::vector<Point> polyline) {
  if (polyline.size() < 3) throw InvalidDomain("level set polyline needs at least 3 vertices");
  const double area = signed_area(polyline);
  if (area == 0.0) throw InvalidDomain("level set polyline has zero area");
  if (area < 0.0) std::reverse(polyline.begin(), polyline.end());
  const bool convex = is_convex_polyline(polyline);
  return Domain(SampledLevelSet{std::move(polyline), convex});
}

Domain Domain::unit_square() {
  return polygon({{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}});
}

Domain Domain::paper_triangle() {
  const double s = std::sqrt(3.0);
  return polygon({{-2.0, 0.0}, {1.0, s}, {1.0, -s}});
}

bool Domain::is_convex() const {
  if (const auto* ls = std::get_if<SampledLevelSet>(&shape_)) return ls->convex;
  return true;
}

bool Domain::contains(const Point& x) const {
  return std::visit(
      Overloaded{
          [&](const Disk& d) { return (x - d.center).squaredNorm() < d.R * d.R; },
          [&](const Ellipse& e) {
            const Vec2 y = x - e.center;
            return e.a.x() * y.x() * y.x() + e.a.y() * y.y() * y.y() < e.R * e.R;
          },
          [&](const ConvexPolygon& p) { return convex_contains(p.vertices, x); },
          [&](const SampledLevelSet& s) {
            return s.convex ? convex_contains(s.polyline, x) : polyline_contains_winding(s.polyline, x);
          },
      },
      shape_);
}

double Domain::ray_exit(const Point& p, const Vec2& dir) const {
  return std::visit(
      Overloaded{
          [&](const Disk& d) { return conic_exit(d.center, Vec2(1.0, 1.0), d.R, p, dir); },
          [&](const Ellipse& e) { return conic_exit(e.center, e.a, e.R, p, dir); },
          [&](const ConvexPolygon& poly) {
            double best = std::numeric_limits<double>::infinity();
            const auto& v = poly.vertices;
            for (std::size_t i = 0; i < v.size(); ++i) {
              const Vec2 n = outward_normal(v[i], v[(i + 1) % v.size()]);
              const double nd = n.dot(dir);
              if (nd > 0.0) best = std::min(best, n.dot(v[i] - p) / nd);
            }
            return best;
          },
          [&](const SampledLevelSet& s) { return polyline_ray_exit(s.polyline, p, dir); },
      },
      shape_);
}

double Domain::distance_to_boundary(const Point& x) const {
  return std::visit(
      Overloaded{
          [&](const Disk& d) { return std::abs(d.R - (x - d.center).norm()); },
          [&](const Ellipse& e) { return ellipse_distance(e, x); },
          [&](const ConvexPolygon& poly) {
            if (!contains(x)) return polyline_distance(poly.vertices, x);
            double best = std::numeric_limits<double>::infinity();
            const auto& v = poly.vertices;
            for (std::size_t i = 0; i < v.size(); ++i) {
              best = std::min(best, outward_normal(v[i], v[(i + 1) % v.size()]).dot(v[i] - x));
            }
            return best;
          },
          [&](const SampledLevelSet& s) { return polyline_distance(s.polyline, x); },
      },
      shape_);
}

BoundingBox Domain::bounds() const {
  return std::visit(
      Overloaded{
          [](const Disk& d) {
            return BoundingBox{d.center - Vec2(d.R, d.R), d.center + Vec2(d.R, d.R)};
          },
          [](const Ellipse& e) {
            const Vec2 s = e.semi_axes();
            return BoundingBox{e.center - s, e.center + s};
          },
          [](const auto& poly) {
            const auto& v = [&]() -> const std::vector<Point>& {
              if constexpr (std::is_same_v<std::decay_t<decltype(poly)>, ConvexPolygon>) {
                return poly.vertices;
              } else {
                return poly.polyline;
              }
            }();
            BoundingBox b{v.front(), v.front()};
            for (const auto& p : v) {
              b.lo = b.lo.cwiseMin(p);
              b.hi = b.hi.cwiseMax(p);
            }
            return b;
          },
      },
      shape_);
}

double Domain::diameter() const {
  return std::visit(Overloaded{
                        [](const Disk& d) { return 2.0 * d.R; },
                        [](const Ellipse& e) { return 2.0 * e.semi_axes().maxCoeff(); },
                        [](const ConvexPolygon& p) { return polyline_diameter(p.vertices); },
                        [](const SampledLevelSet& s) { return polyline_diameter(s.polyline); },
                    },
                    shape_);
}

double Domain::area() const {
  return std::visit(Overloaded{
                        [](const Disk& d) { return kPi * d.R * d.R; },
                        [](const Ellipse& e) { return kPi * e.semi_axes().prod(); },
                        [](const ConvexPolygon& p) { return signed_area(p.vertices); },
                        [](const SampledLevelSet& s) { return signed_area(s.polyline); },
                    },
                    shape_);
}

double Domain::perimeter() const {
  return std::visit(Overloaded{
                        [](const Disk& d) { return 2.0 * kPi * d.R; },
                        [](const Ellipse& e) {
                          // Ramanujan's second approximation.
                          const Vec2 s = e.semi_axes();
                          const double a = s.x();
                          const double b = s.y();
                          const double h = ((a - b) * (a - b)) / ((a + b) * (a + b));
                          return kPi * (a + b) * (1.0 + 3.0 * h / (10.0 + std::sqrt(4.0 - 3.0 * h)));
                        },
                        [](const ConvexPolygon& p) { return polyline_perimeter(p.vertices); },
                        [](const SampledLevelSet& s) { return polyline_perimeter(s.polyline); },
                    },
                    shape_);
}

double Domain::inradius() const {
  return std::visit(Overloaded{
                        [](const Disk& d) { return d.R; },
                        [](const Ellipse& e) { return e.semi_axes().minCoeff(); },
                        [](const ConvexPolygon& p) { return convex_inradius(p.vertices); },
                        [this](const SampledLevelSet& s) {
                          if (s.convex) return convex_inradius(s.polyline);
                          const Point c = polyline_centroid(s.polyline);
                          return contains(c) ? polyline_distance(s.polyline, c) : 0.0;
                        },
                    },
                    shape_);
}

Point Domain::centroid() const {
  return std::visit(Overloaded{
                        [](const Disk& d) { return d.center; },
                        [](const Ellipse& e) { return e.center; },
                        [](const ConvexPolygon& p) { return polyline_centroid(p.vertices); },
                        [](const SampledLevelSet& s) { return polyline_centroid(s.polyline); },
                    },
                    shape_);
}

std::vector<BoundarySample> Domain::boundary_samples(int n) const {
  if (n <= 0) throw InvalidArgument("boundary sample count must be positive");
  return std::visit(
      Overloaded{
          [n](const Disk& d) {
            std::vector<BoundarySample> out;
            for (int k = 0; k < n; ++k) {
              const double t = 2.0 * kPi * (k + 0.5) / n;
              const Vec2 u(std::cos(t), std::sin(t));
              out.push_back({d.center + d.R * u, u});
            }
            return out;
          },
          [n](const Ellipse& e) {
            const Vec2 s = e.semi_axes();
            std::vector<BoundarySample> out;
            for (int k = 0; k < n; ++k) {
              const double t = 2.0 * kPi * (k + 0.5) / n;
              const Point p = e.center + Vec2(s.x() * std::cos(t), s.y() * std::sin(t));
              const Vec2 normal = Vec2(std::cos(t) / s.x(), std::sin(t) / s.y()).normalized();
              out.push_back({p, normal});
            }
            return out;
          },
          [n](const ConvexPolygon& p) { return polyline_samples(p.vertices, n); },
          [n](const SampledLevelSet& s) { return polyline_samples(s.polyline, n); },
      },
      shape_);
}

std::vector<Point> Domain::boundary_polyline(int n) const {
  return std::visit(Overloaded{
                        [n](const Disk& d) { return conic_polyline(d.center, Vec2(d.R, d.R), n); },
                        [n](const Ellipse& e) { return conic_polyline(e.center, e.semi_axes(), n); },
                        [](const ConvexPolygon& p) { return p.vertices; },
                        [](const SampledLevelSet& s) { return s.polyline; },
                    },
                    shape_);
}

double signed_area(std::span<const Point> poly) {
  double a2 = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) a2 += cross(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * a2;
}

PolygonMetrics polygon_metrics(std::span<const Point> poly) {
  if (poly.size() < 3) throw DegeneratePolygon("polyline needs at least 3 vertices");
  const double area = std::abs(signed_area(poly));
  const double perimeter = polyline_perimeter(poly);
  if (!(area > 1e-14 * perimeter * perimeter)) throw DegeneratePolygon("polyline encloses zero area");
  return {area, perimeter};
}

bool is_convex_polyline(std::span<const Point> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  Point lo = poly[0];
  Point hi = poly[0];
  for (const auto& p : poly) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double scale = (hi - lo).maxCoeff();
  const double tol = 1e-12 * scale * scale;
  int sign = 0;
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e1 = poly[(i + 1) % n] - poly[i];
    const Vec2 e2 = poly[(i + 2) % n] - poly[(i + 1) % n];
    const double c = cross(e1, e2);
    if (std::abs(c) > tol) {
      const int s = c > 0.0 ? 1 : -1;
      if (sign == 0) sign = s;
      if (s != sign) return false;
    }
    turning += std::atan2(c, e1.dot(e2));
  }
  // Rules out self-intersecting star shapes whose turns all share a sign.
  return std::abs(std::abs(turning) - 2.0 * kPi) < 1e-6;
}

double clipped_box_area(std::span<const Point> convex_ccw, const Point& lo, const Point& hi) {
  std::vector<Point> poly(convex_ccw.begin(), convex_ccw.end());
  std::vector<Point> next;
  auto clip = [&](auto inside, auto intersect) {
    next.clear();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& cur = poly[i];
      const Point& prev = poly[(i + n - 1) % n];
      const bool in_cur = inside(cur);
      const bool in_prev = inside(prev);
      if (in_cur) {
        if (!in_prev) next.push_back(intersect(prev, cur));
        next.push_back(cur);
      } else if (in_prev) {
        next.push_back(intersect(prev, cur));
      }
    }
    poly.swap(next);
  };
  auto at_x = [](double x) {
    return [x](const Point& a, const Point& b) {
      const double t = (x - a.x()) / (b.x() - a.x());
      return Point(x, a.y() + t * (b.y() - a.y()));
    };
  };
  auto at_y = [](double y) {
    return [y](const Point& a, const Point& b) {
      const double t = (y - a.y()) / (b.y() - a.y());
      return Point(a.x() + t * (b.x() - a.x()), y);
    };
  };
  clip([&](const Point& p) { return p.x() >= lo.x(); }, at_x(lo.x()));
  if (poly.empty()) return 0.0;
  clip([&](const Point& p) { return p.x() <= hi.x(); }, at_x(hi.x()));
  if (poly.empty()) return 0.0;
  clip([&](const Point& p) { return p.y() >= lo.y(); }, at_y(lo.y()));
  if (poly.empty()) return 0.0;
  clip([&](const Point& p) { return p.y() <= hi.y(); }, at_y(hi.y()));
  if (poly.size() < 3) return 0.0;
  return std::abs(signed_area(poly));
}

namespace {

nlohmann::json point_json(const Point& p) { return nlohmann::json::array({p.x(), p.y()}); }

Point point_from(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidDomain("expected a point [x, y]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

std::vector<Point> points_from(const nlohmann::json& j) {
  if (!j.is_array()) throw InvalidDomain("expected an array of points");
  std::vector<Point> out;
  for (const auto& p : j) out.push_back(point_from(p));
  return out;
}

}  // namespace

nlohmann::json to_json(const Domain& domain) {
  return std::visit(
      Overloaded{
          [](const Disk& d) {
            return nlohmann::json{{"type", "disk"}, {"center", point_json(d.center)}, {"R", d.R}};
          },
          [](const Ellipse& e) {
            return nlohmann::json{{"type", "ellipse"},
                                  {"center", point_json(e.center)},
                                  {"a", point_json(e.a)},
                                  {"R", e.R}};
          },
          [](const ConvexPolygon& p) {
            nlohmann::json v = nlohmann::json::array();
            for (const auto& q : p.vertices) v.push_back(point_json(q));
            return nlohmann::json{{"type", "polygon"}, {"vertices", v}};
          },
          [](const SampledLevelSet& s) {
            nlohmann::json v = nlohmann::json::array();
            for (const auto& q : s.polyline) v.push_back(point_json(q));
            return nlohmann::json{{"type", "level_set"}, {"polyline", v}, {"convex", s.convex}};
          },
      },
      domain.shape());
}

Domain domain_from_json(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "disk") {
      return Domain::disk(point_from(j.value("center", nlohmann::json::array({0.0, 0.0}))),
                          j.at("R").get<double>());
    }
    if (type == "ellipse") {
      return Domain::ellipse(point_from(j.value("center", nlohmann::json::array({0.0, 0.0}))),
                             point_from(j.at("a")), j.at("R").get<double>());
    }
    if (type == "polygon") return Domain::polygon(points_from(j.at("vertices")));
    if (type == "level_set") return Domain::level_set(points_from(j.at("polyline")));
    throw InvalidDomain("unknown domain type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidDomain(std::string("malformed domain document: ") + e.what());
  }
}

}  // namespace torsion
