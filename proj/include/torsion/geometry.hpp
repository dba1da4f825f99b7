#pragma once

#include <cmath>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace torsion {

using Point = Eigen::Vector2d;
using Vec2 = Eigen::Vector2d;

struct Disk {
  Point center{0.0, 0.0};
  double R = 1.0;
};

/// {x : a_1 (x_1 - c_1)^2 + a_2 (x_2 - c_2)^2 < R^2} with a_1 + a_2 = 2.
struct Ellipse {
  Point center{0.0, 0.0};
  Vec2 a{1.0, 1.0};
  double R = 1.0;

  Vec2 semi_axes() const { return {R / std::sqrt(a.x()), R / std::sqrt(a.y())}; }
};

/// Counter-clockwise vertices, every interior angle < pi.
struct ConvexPolygon {
  std::vector<Point> vertices;
};

/// Closed polyline (last vertex joins the first), typically an extracted
/// level set. Convexity is measured at construction.
struct SampledLevelSet {
  std::vector<Point> polyline;
  bool convex = false;
};

struct BoundingBox {
  Point lo;
  Point hi;
};

struct BoundarySample {
  Point point;
  Vec2 outward_normal;
};

struct PolygonMetrics {
  double area = 0.0;
  double perimeter = 0.0;
};

/// A bounded planar region. Immutable after construction; the factories
/// validate the shape invariants and throw InvalidDomain otherwise.
class Domain {
 public:
  using Shape = std::variant<Disk, Ellipse, ConvexPolygon, SampledLevelSet>;

  static Domain disk(const Point& center, double R);
  static Domain ellipse(const Point& center, const Vec2& a, double R);
  /// Accepts either orientation and stores the vertices counter-clockwise.
  static Domain polygon(std::vector<Point> vertices);
  static Domain level_set(std::vector<Point> polyline);

  /// (-1, 1)^2
  static Domain unit_square();
  /// Equilateral triangle with vertices (-2,0), (1,sqrt 3), (1,-sqrt 3).
  static Domain paper_triangle();

  const Shape& shape() const { return shape_; }
  bool is_convex() const;

  /// Strict membership in the open region.
  bool contains(const Point& x) const;

  /// Distance from an interior point to the boundary along the unit
  /// direction `dir`.
  double ray_exit(const Point& p, const Vec2& dir) const;

  /// Euclidean distance from an interior point to the boundary.
  double distance_to_boundary(const Point& x) const;

  BoundingBox bounds() const;
  double diameter() const;
  double area() const;
  double perimeter() const;
  /// Radius of the largest inscribed disk (approximate for polylines).
  double inradius() const;
  Point centroid() const;

  /// `n` boundary points, roughly equispaced, with outward unit normals.
  /// Polygon vertices are avoided since the normal is undefined there.
  std::vector<BoundarySample> boundary_samples(int n) const;

  /// Counter-clockwise polygonal approximation. Exact for polygons;
  /// `n` vertices for the conic shapes.
  std::vector<Point> boundary_polyline(int n = 4096) const;

 private:
  explicit Domain(Shape shape) : shape_(std::move(shape)) {}
  Shape shape_;
};

inline bool contains(const Domain& domain, const Point& x) { return domain.contains(x); }

double signed_area(std::span<const Point> poly);

/// Shoelace area (absolute value) and perimeter of a closed polyline.
/// Throws DegeneratePolygon for fewer than 3 vertices or zero area.
PolygonMetrics polygon_metrics(std::span<const Point> poly);

/// Cross-product test with tolerance 1e-12 * scale^2, scale being the
/// bounding-box extent. Collinear runs are tolerated; either orientation.
bool is_convex_polyline(std::span<const Point> poly);

/// Area of the axis-aligned box [lo, hi] intersected with a convex CCW polygon.
double clipped_box_area(std::span<const Point> convex_ccw, const Point& lo, const Point& hi);

nlohmann::json to_json(const Domain& domain);
Domain domain_from_json(const nlohmann::json& j);

}  // namespace torsion
