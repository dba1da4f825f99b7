#include "torsion/closed_forms.hpp"

#include <cmath>

#include "torsion/errors.hpp"

namespace torsion {

SmoothField::SmoothField(int dimension, Rule rule, std::optional<Domain> domain, std::string name)
    : dimension_(dimension), rule_(std::move(rule)), domain_(std::move(domain)), name_(std::move(name)) {
  if (dimension_ < 1) throw InvalidArgument("field dimension must be positive");
  if (domain_ && dimension_ != 2) throw InvalidArgument("only planar fields carry a domain");
}

Jet SmoothField::jet(const Eigen::VectorXd& x) const {
  if (x.size() != dimension_) throw InvalidArgument("point dimension does not match the field");
  return rule_(x);
}

double SmoothField::value(const Point& x) const {
  return jet(Eigen::VectorXd(x)).value;
}

SmoothField ball_torsion(const Eigen::VectorXd& center, double R, int n) {
  if (!(R > 0.0)) throw InvalidArgument("ball radius must be positive");
  if (n < 2 || center.size() != n) throw InvalidArgument("ball centre must have dimension n >= 2");
  std::optional<Domain> domain;
  if (n == 2) domain = Domain::disk(Point(center(0), center(1)), R);
  const double inv = 1.0 / (2.0 * n);
  auto rule = [center, R, n, inv](const Eigen::VectorXd& x) {
    const Eigen::VectorXd y = x - center;
    return Jet{(R * R - y.squaredNorm()) * inv, -y / n, -Eigen::MatrixXd::Identity(n, n) / n};
  };
  return SmoothField(n, rule, domain, "ball");
}

SmoothField ball_torsion(const Point& center, double R) {
  return ball_torsion(Eigen::VectorXd(center), R, 2);
}

SmoothField ellipsoid_torsion(const Eigen::VectorXd& center, const Eigen::VectorXd& a, double R) {
  const auto n = static_cast<int>(a.size());
  if (n < 2 || center.size() != n) throw InvalidArgument("ellipsoid centre and coefficients must share dimension n >= 2");
  if (!(R > 0.0)) throw InvalidArgument("ellipsoid radius must be positive");
  if ((a.array() <= 0.0).any()) throw InvalidArgument("ellipsoid coefficients must be positive");
  if (std::abs(a.sum() - n) > 1e-12) throw InvalidArgument("ellipsoid coefficients must sum to n");
  std::optional<Domain> domain;
  if (n == 2) domain = Domain::ellipse(Point(center(0), center(1)), Vec2(a(0), a(1)), R);
  const double inv = 1.0 / (2.0 * n);
  auto rule = [center, a, R, n, inv](const Eigen::VectorXd& x) {
    const Eigen::VectorXd y = x - center;
    const double q = (a.array() * y.array().square()).sum();
    Eigen::VectorXd grad = -(a.array() * y.array()).matrix() / n;
    Eigen::MatrixXd hess = -Eigen::MatrixXd(a.asDiagonal()) / n;
    return Jet{(R * R - q) * inv, std::move(grad), std::move(hess)};
  };
  return SmoothField(n, rule, domain, "ellipsoid");
}

SmoothField ellipsoid_torsion(const Point& center, const Vec2& a, double R) {
  return ellipsoid_torsion(Eigen::VectorXd(center), Eigen::VectorXd(a), R);
}

SmoothField triangle_torsion() {
  auto rule = [](const Eigen::VectorXd& p) {
    const double x = p(0);
    const double y = p(1);
    Jet j;
    j.value = (4.0 - 3.0 * y * y + 3.0 * x * y * y - 3.0 * x * x - x * x * x) / 12.0;
    j.gradient.resize(2);
    j.gradient << (3.0 * y * y - 6.0 * x - 3.0 * x * x) / 12.0, (6.0 * x * y - 6.0 * y) / 12.0;
    j.hessian.resize(2, 2);
    j.hessian << (-6.0 - 6.0 * x) / 12.0, 6.0 * y / 12.0, 6.0 * y / 12.0, (6.0 * x - 6.0) / 12.0;
    return j;
  };
  return SmoothField(2, rule, Domain::paper_triangle(), "triangle");
}

}  // namespace torsion
