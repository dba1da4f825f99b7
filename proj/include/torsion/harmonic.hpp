#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "torsion/field.hpp"

namespace torsion {

struct HarmonicOptions {
  int n_radii = 8;
  int n_angles = 256;
  int max_mode = 12;
  /// rho = rho_factor * dist(x*, boundary), further capped by the jet margin.
  double rho_factor = 0.8;
};

/// Least-squares amplitudes of a_k(r) ~ c r^k and b_k(r) ~ c r^k.
struct ModeFit {
  int k = 0;
  double c_cos = 0.0;
  double c_sin = 0.0;
  double amplitude = 0.0;
  /// Standard error of the amplitude fit.
  double sigma = 0.0;
  double threshold = 0.0;
  bool retained = false;
  /// max_j |q_j - mean q| / |mean q| with q_j = (a_k + i b_k)(r_j) / r_j^k.
  double harmonicity_dev = 0.0;
};

/// Expansion of v = M - u about the max point x*:
///   v = (lambda_1 x_1^2 + lambda_2 x_2^2) / 2 + z,
/// with (x_1, x_2) the coordinates in the eigenframe of D^2 v(x*), and the
/// remainder z sampled on circles and split into Fourier modes.
struct HarmonicDecomposition {
  Point base = Point::Zero();
  double M = 0.0;
  /// lambda_1 >= lambda_2.
  Vec2 lambda = Vec2::Zero();
  /// Angle in [0, pi) of the lambda_1 eigenvector; 0 when the eigenvalues
  /// coincide to 1e-6.
  double rotation = 0.0;
  double rho = 0.0;
  std::vector<double> radii;
  /// a[j][k], b[j][k]: cosine and sine coefficients of z on radius j.
  std::vector<std::vector<double>> a;
  std::vector<std::vector<double>> b;
  /// Modes 0..K.
  std::vector<ModeFit> modes;
  /// Smallest k >= 3 whose amplitude exceeds its threshold.
  std::optional<int> k_bar;
  /// Largest |a_k|, |b_k| over radii for k = 0, 1, 2.
  double low_mode_residual = 0.0;

  /// (1/2) sum lambda_i xi_i^2, xi given in world coordinates.
  double A(const Vec2& xi) const;
  /// z_k(xi) = c_cos cos k theta + c_sin sin k theta, theta measured in the
  /// eigenframe.
  double z_mode(int k, const Vec2& xi) const;
};

/// Throws InvalidArgument for n_angles < 4K or fewer than 3 radii,
/// TooCloseToBoundary when the max point sits on the boundary.
HarmonicDecomposition decompose(const EvaluableField& f, const HarmonicOptions& options = {});

struct ModeCheck {
  int k = 0;
  double deviation = 0.0;
  bool pass = false;
};

/// One entry per retained mode.
std::vector<ModeCheck> harmonicity_check(const HarmonicDecomposition& d, double tol);

/// 2 v v_rr - v_r^2 along the ray base + r xi.
double radial_sign_quantity(const EvaluableField& f, const Point& base, const Vec2& xi, double r);

struct LeadingTermFit {
  double exponent = 0.0;
  double coefficient = 0.0;
  /// 2 A(xi) (k^2 - 3k + 2) z_k(xi) for k = k_bar; NaN when no mode was
  /// detected.
  double predicted = 0.0;
  int samples = 0;
};

/// Log-log least squares of |2 v v_rr - v_r^2| over log-spaced r in
/// [r_lo, r_hi]. Throws BelowNoiseFloor when |q| stays under 1e-12 M^2 and
/// SignChange when q changes sign in the range.
LeadingTermFit leading_term_fit(const EvaluableField& f, const HarmonicDecomposition& d, const Vec2& xi, double r_lo,
                                double r_hi, int samples = 24);

double predicted_leading_coefficient(const HarmonicDecomposition& d, const Vec2& xi);

nlohmann::json to_json(const HarmonicDecomposition& d);
nlohmann::json to_json(const LeadingTermFit& fit);

}  // namespace torsion
