#pragma once

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "torsion/geometry.hpp"

namespace torsion {

/// Value, gradient and Hessian of a scalar field at one point.
struct Jet {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// Scalar field known in closed form, with analytic derivatives.
///
/// Closed forms are the exact oracles for the grid solver and exact inputs for
/// the analysis code. Planar fields carry their natural domain; fields in
/// higher dimension have none since grids are planar only.
class SmoothField {
 public:
  using Rule = std::function<Jet(const Eigen::VectorXd&)>;

  SmoothField(int dimension, Rule rule, std::optional<Domain> domain, std::string name);

  Jet jet(const Eigen::VectorXd& x) const;
  double value(const Eigen::VectorXd& x) const { return jet(x).value; }
  double value(const Point& x) const;

  int dimension() const { return dimension_; }
  const std::optional<Domain>& domain() const { return domain_; }
  const std::string& name() const { return name_; }

 private:
  int dimension_;
  Rule rule_;
  std::optional<Domain> domain_;
  std::string name_;
};

/// u_B(x) = (R^2 - |x - c|^2) / (2n).
SmoothField ball_torsion(const Eigen::VectorXd& center, double R, int n);
SmoothField ball_torsion(const Point& center, double R);

/// u_E(x) = (R^2 - sum a_i (x_i - c_i)^2) / (2n), n = a.size().
/// Throws InvalidArgument unless all a_i > 0 and sum a_i = n within 1e-12.
SmoothField ellipsoid_torsion(const Eigen::VectorXd& center, const Eigen::VectorXd& a, double R);
SmoothField ellipsoid_torsion(const Point& center, const Vec2& a, double R);

/// u_T(x, y) = (4 - 3y^2 + 3xy^2 - 3x^2 - x^3) / 12 on the triangle with
/// vertices (-2,0), (1,sqrt 3), (1,-sqrt 3).
SmoothField triangle_torsion();

}  // namespace torsion
