#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "torsion/field.hpp"

namespace torsion {

enum class Verdict { Holds, Fails, Inconclusive };

std::string to_string(Verdict v);

/// Where a test was violated. Hessian witnesses carry the offending
/// eigenvector; midpoint witnesses carry both endpoints and the midpoint.
struct Witness {
  enum class Kind { Hessian, Midpoint, Negative };
  Kind kind = Kind::Hessian;
  Point point = Point::Zero();
  Vec2 direction = Vec2::Zero();
  Point x = Point::Zero();
  Point y = Point::Zero();
  double violation = 0.0;
};

/// Violations are reported as curvatures in units of M / length^2, so
/// Hessian and midpoint tests share one tolerance: a midpoint gap g over a
/// chord of length l counts as 8 g / l^2.
///
/// holds: worst violation <= tol. inconclusive: tol < worst <= 10 tol.
/// fails: worst > 10 tol, with the witness attached.
struct ConcavityReport {
  Verdict verdict = Verdict::Holds;
  std::optional<Witness> witness;
  std::size_t points_tested = 0;
  std::size_t pairs_tested = 0;
  double margin = 0.0;
  double tol = 0.0;
  double worst_violation = 0.0;
};

struct ConcavityOptions {
  /// Distance from the boundary below which Hessians are not sampled.
  /// Non-positive means the default: 3h for grid fields, 1e-3 d for closed
  /// forms.
  double margin = 0.0;
  /// Non-positive means 1e-6 M / d^2, d the domain diameter.
  double tol = 0.0;
  int midpoint_pairs = 10'000;
  std::uint64_t seed = 20'240'601;
};

double default_margin(const EvaluableField& f);
double default_tolerance(const EvaluableField& f);

/// Tests concavity of f^alpha by the sign of the Hessian of f^alpha at
/// interior samples and by midpoint concavity on random pairs.
///
/// The Hessian is taken from the jet of f by the chain rule and scaled by
/// 1 / (alpha M^(alpha-1)), which leaves D^2 f unchanged for alpha = 1:
///   (f/M)^(alpha-1) [ (alpha-1) grad f grad f^T / f + D^2 f ].
/// Throws EmptySampleSet when the margin leaves no Hessian samples.
ConcavityReport is_power_concave(const EvaluableField& f, double alpha, const ConcavityOptions& options = {});

/// Final bisection bracket for the concavity exponent.
struct ExponentBracket {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;
};

/// Bisection over [0.45, 1.10]. Anything other than holds counts as a
/// failure. Throws InconsistentBracket when the endpoints disagree with that
/// ordering.
ExponentBracket concavity_exponent(const EvaluableField& f, double bisection_tol,
                                   const ConcavityOptions& options = {});

/// Convexity of w = sqrt(M - f). Hessian violations are -2 sqrt(M) times the
/// smallest eigenvalue of D^2 w; the max point itself, where w has a cone
/// singularity, is excluded from the Hessian samples.
ConcavityReport property_A_check(const EvaluableField& f, const ConcavityOptions& options = {});

/// Builds v(x) = f(x0) + grad f(x0) . (x - x0) - f(x) on the ball B(x0, radius),
/// requires v >= 0 there and tests convexity of sqrt(v) as in
/// property_A_check. Throws OutOfDomain when the ball leaves the domain.
ConcavityReport local_property_A_check(const EvaluableField& f, const Point& x0, double radius,
                                       const ConcavityOptions& options = {});

/// alpha f^(alpha-2) [ (alpha-1) |grad f|^2 - f ], the Laplacian of f^alpha for
/// a torsion function.
double excess_laplacian_power(const EvaluableField& f, double alpha, const Point& x);

struct LevelSetBound {
  double alpha = 0.0;
  double epsilon = 0.0;
  double volume = 0.0;
  double perimeter = 0.0;
  /// (alpha - 1) Vol^2 / Per - epsilon Per
  double bracket = 0.0;
  bool convex = false;
};

/// Extracts {u = epsilon} by marching squares and evaluates the bracket.
/// Solved fields use the ghost-extended node lattice; closed forms are
/// sampled on a lattice of spacing `h`.
LevelSetBound level_set_bound_check(const SolveResult& result, double alpha, double epsilon);
LevelSetBound level_set_bound_check(const SmoothField& field, double alpha, double epsilon, double h);

struct GradientStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double spread = 0.0;
  std::size_t samples = 0;
};

/// |grad u| on the boundary from second-order one-sided differences along
/// the inward normal, steps s and 2s with s = 4h (s = d/256 for closed forms).
GradientStats boundary_gradient_stats(const EvaluableField& f, int n_samples = 512);
GradientStats boundary_gradient_stats(const SolveResult& result, int n_samples = 512);

nlohmann::json to_json(const ConcavityReport& report);
nlohmann::json to_json(const ExponentBracket& bracket);
nlohmann::json to_json(const LevelSetBound& bound);
nlohmann::json to_json(const GradientStats& stats);

}  // namespace torsion
