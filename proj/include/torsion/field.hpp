#pragma once

#include <memory>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "torsion/closed_forms.hpp"
#include "torsion/level_set.hpp"
#include "torsion/solver.hpp"

namespace torsion {

/// Planar jet: value, gradient, symmetric Hessian.
struct Jet2 {
  double value = 0.0;
  Vec2 gradient = Vec2::Zero();
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
};

/// C^1 bicubic Hermite surface through the nodes of a GridField.
///
/// Node derivatives come from fourth-order central differences. Near the
/// boundary the stencils read ghost values: each row and column of unknowns
/// is extended past the boundary by the quadratic through u = 0 on the
/// boundary and the two nearest unknowns. Cells without full derivative data
/// fall back to bilinear interpolation.
class GridInterpolant {
 public:
  explicit GridInterpolant(GridField field);

  /// No domain or margin checks; callers go through EvaluableField.
  Jet2 jet(const Point& x) const;
  double value(const Point& x) const;

  const GridField& field() const { return field_; }
  /// Node values with ghost layers; NaN beyond them.
  const std::vector<double>& extended_values() const { return f_; }

 private:
  bool cubic_ready(int node) const;

  GridField field_;
  std::vector<double> f_;
  std::vector<double> fx_;
  std::vector<double> fy_;
  std::vector<double> fxy_;
};

/// Either a closed form or an interpolated grid solution, evaluated through
/// one interface. Knows its maximum and where it is attained.
class EvaluableField {
 public:
  static EvaluableField analytic(SmoothField field);
  /// Starts from the solver's refined argmax and polishes it on the surface.
  static EvaluableField from_solve(const SolveResult& result);
  static EvaluableField from_grid(GridField field);

  /// Throws OutOfDomain outside the domain and, for grid-backed fields,
  /// TooCloseToBoundary within 2h of the boundary.
  Jet2 jet(const Point& x) const;
  /// Value anywhere in the open domain, boundary layer included.
  double value(const Point& x) const;

  const Domain& domain() const { return domain_; }
  double max_value() const { return max_value_; }
  const Point& argmax() const { return argmax_; }
  bool grid_backed() const { return std::holds_alternative<Grid>(source_); }
  /// Grid spacing, 0 for closed forms.
  double spacing() const;
  /// Minimum distance to the boundary at which jet() is available.
  double jet_margin() const { return 2.0 * spacing(); }
  const SmoothField* smooth() const { return std::get_if<SmoothField>(&source_); }
  const GridInterpolant* interpolant() const;

 private:
  using Grid = std::shared_ptr<const GridInterpolant>;
  EvaluableField(std::variant<SmoothField, Grid> source, Domain domain);
  Jet2 raw_jet(const Point& x) const;
  void locate_max(const Point& start);

  std::variant<SmoothField, Grid> source_;
  Domain domain_;
  double max_value_ = 0.0;
  Point argmax_ = Point::Zero();
};

Jet2 eval_jet(const EvaluableField& f, const Point& x);

/// v(r) = M - u(base + r xi) with its first two radial derivatives.
struct RadialJet {
  double v = 0.0;
  double v_r = 0.0;
  double v_rr = 0.0;
};

/// M is the field's maximum; xi is normalised internally.
RadialJet radial_jet(const EvaluableField& f, const Point& base, const Vec2& xi, double r);

/// Lattice view of a grid-backed field for level-set extraction: ghost values
/// near the boundary, -M further out.
ScalarLattice extended_lattice(const GridInterpolant& interp);

}  // namespace torsion
