#include "torsion/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Eigenvalues>

#include "torsion/errors.hpp"
#include "torsion/format.hpp"

namespace torsion {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegenerate = 1e-6;

Eigen::Matrix2d rotation_matrix(double t) {
  Eigen::Matrix2d r;
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

}  // namespace

double HarmonicDecomposition::A(const Vec2& xi) const {
  const Vec2 e = rotation_matrix(rotation).transpose() * xi.normalized();
  return 0.5 * (lambda(0) * e(0) * e(0) + lambda(1) * e(1) * e(1));
}

double HarmonicDecomposition::z_mode(int k, const Vec2& xi) const {
  if (k < 0 || k >= static_cast<int>(modes.size())) throw InvalidArgument("mode index out of range");
  const double theta = std::atan2(xi.y(), xi.x()) - rotation;
  const ModeFit& m = modes[static_cast<std::size_t>(k)];
  return m.c_cos * std::cos(k * theta) + m.c_sin * std::sin(k * theta);
}

HarmonicDecomposition decompose(const EvaluableField& f, const HarmonicOptions& o) {
  if (o.n_radii < 3) throw InvalidArgument("at least 3 radii are needed");
  if (o.max_mode < 3) throw InvalidArgument("the mode range must reach k = 3");
  if (o.n_angles < 4 * o.max_mode) throw InvalidArgument("n_angles must be at least 4K to avoid aliasing");
  if (!(o.rho_factor > 0.0) || !(o.rho_factor < 1.0)) throw InvalidArgument("rho factor must lie in (0, 1)");

  HarmonicDecomposition d;
  d.base = f.argmax();
  d.M = f.max_value();
  const Domain& dom = f.domain();
  if (!dom.contains(d.base)) throw TooCloseToBoundary("max point is not interior");
  const double dist = dom.distance_to_boundary(d.base);
  d.rho = std::min(o.rho_factor * dist, dist - f.jet_margin());
  if (!(d.rho > 0.0)) throw TooCloseToBoundary("max point is too close to the boundary");

  const Jet2 j = f.jet(d.base);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(-j.hessian);
  d.lambda = Vec2(es.eigenvalues()(1), es.eigenvalues()(0));
  if (d.lambda(0) - d.lambda(1) >= kDegenerate) {
    Vec2 e = es.eigenvectors().col(1);
    if (e.y() < 0.0 || (e.y() == 0.0 && e.x() < 0.0)) e = -e;
    d.rotation = std::atan2(e.y(), e.x());
    if (d.rotation >= kPi) d.rotation -= kPi;
  }
  const Eigen::Matrix2d R = rotation_matrix(d.rotation);

  const int K = o.max_mode;
  const int N = o.n_angles;
  const double r_lo = d.rho / 16.0;
  const double r_hi = d.rho / 2.0;
  for (int i = 0; i < o.n_radii; ++i) d.radii.push_back(r_lo * std::pow(r_hi / r_lo, i / (o.n_radii - 1.0)));

  std::vector<double> z(static_cast<std::size_t>(N));
  for (double r : d.radii) {
    for (int t = 0; t < N; ++t) {
      const double th = 2.0 * kPi * t / N;
      const Vec2 local(r * std::cos(th), r * std::sin(th));
      const double v = d.M - f.value(d.base + R * local);
      z[static_cast<std::size_t>(t)] =
          v - 0.5 * (d.lambda(0) * local(0) * local(0) + d.lambda(1) * local(1) * local(1));
    }
    std::vector<double> a(static_cast<std::size_t>(K + 1));
    std::vector<double> b(static_cast<std::size_t>(K + 1));
    for (int k = 0; k <= K; ++k) {
      double sc = 0.0;
      double ss = 0.0;
      for (int t = 0; t < N; ++t) {
        const double th = 2.0 * kPi * t / N;
        sc += z[static_cast<std::size_t>(t)] * std::cos(k * th);
        ss += z[static_cast<std::size_t>(t)] * std::sin(k * th);
      }
      const double w = (k == 0 ? 1.0 : 2.0) / N;
      a[static_cast<std::size_t>(k)] = w * sc;
      b[static_cast<std::size_t>(k)] = w * ss;
      if (k <= 2) {
        d.low_mode_residual = std::max({d.low_mode_residual, std::abs(w * sc), std::abs(w * ss)});
      }
    }
    d.a.push_back(std::move(a));
    d.b.push_back(std::move(b));
  }

  const std::size_t n = d.radii.size();
  for (int k = 0; k <= K; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    double srr = 0.0;
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = std::pow(d.radii[i], k);
      srr += p * p;
      sa += d.a[i][ks] * p;
      sb += d.b[i][ks] * p;
    }
    ModeFit m;
    m.k = k;
    m.c_cos = sa / srr;
    m.c_sin = sb / srr;
    m.amplitude = std::hypot(m.c_cos, m.c_sin);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = std::pow(d.radii[i], k);
      res += std::pow(d.a[i][ks] - m.c_cos * p, 2) + std::pow(d.b[i][ks] - m.c_sin * p, 2);
    }
    m.sigma = std::sqrt(res / static_cast<double>(n - 1) / srr);
    m.threshold = std::max(1e-4 * d.M / std::pow(d.rho, k), 5.0 * m.sigma);
    m.retained = k >= 3 && m.amplitude > m.threshold;

    std::vector<std::complex<double>> q;
    std::complex<double> mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      q.emplace_back(d.a[i][ks], d.b[i][ks]);
      q.back() /= std::pow(d.radii[i], k);
      mean += q.back();
    }
    mean /= static_cast<double>(n);
    double dev = 0.0;
    for (const auto& qi : q) dev = std::max(dev, std::abs(qi - mean));
    m.harmonicity_dev = std::abs(mean) > 0.0 ? dev / std::abs(mean) : std::numeric_limits<double>::infinity();
    if (m.retained && !d.k_bar) d.k_bar = k;
    d.modes.push_back(m);
  }
  return d;
}

std::vector<ModeCheck> harmonicity_check(const HarmonicDecomposition& d, double tol) {
  std::vector<ModeCheck> out;
  for (const ModeFit& m : d.modes) {
    if (m.retained) out.push_back({m.k, m.harmonicity_dev, m.harmonicity_dev <= tol});
  }
  return out;
}

double radial_sign_quantity(const EvaluableField& f, const Point& base, const Vec2& xi, double r) {
  const RadialJet j = radial_jet(f, base, xi, r);
  return 2.0 * j.v * j.v_rr - j.v_r * j.v_r;
}

double predicted_leading_coefficient(const HarmonicDecomposition& d, const Vec2& xi) {
  if (!d.k_bar) return std::numeric_limits<double>::quiet_NaN();
  const int k = *d.k_bar;
  return 2.0 * d.A(xi) * (k * k - 3 * k + 2) * d.z_mode(k, xi);
}

LeadingTermFit leading_term_fit(const EvaluableField& f, const HarmonicDecomposition& d, const Vec2& xi, double r_lo,
                                double r_hi, int samples) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo)) throw InvalidArgument("fit range must satisfy 0 < r_lo < r_hi");
  if (r_hi > d.rho) throw InvalidArgument("fit range exceeds rho");
  if (samples < 3) throw InvalidArgument("at least 3 fit samples are needed");

  std::vector<double> r(static_cast<std::size_t>(samples));
  std::vector<double> q(static_cast<std::size_t>(samples));
  double qmax = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto is = static_cast<std::size_t>(i);
    r[is] = r_lo * std::pow(r_hi / r_lo, i / (samples - 1.0));
    q[is] = radial_sign_quantity(f, d.base, xi, r[is]);
    qmax = std::max(qmax, std::abs(q[is]));
  }
  if (qmax < 1e-12 * d.M * d.M) throw BelowNoiseFloor("radial sign quantity is below the noise floor");
  for (double qi : q) {
    if (qi == 0.0 || (qi > 0.0) != (q.front() > 0.0)) throw SignChange("radial sign quantity changes sign in the fit range");
  }

  Eigen::MatrixXd X(samples, 2);
  Eigen::VectorXd y(samples);
  for (int i = 0; i < samples; ++i) {
    const auto is = static_cast<std::size_t>(i);
    X(i, 0) = 1.0;
    X(i, 1) = std::log(r[is]);
    y(i) = std::log(std::abs(q[is]));
  }
  const Eigen::Vector2d c = X.colPivHouseholderQr().solve(y);
  LeadingTermFit out;
  out.exponent = c(1);
  out.coefficient = (q.front() > 0.0 ? 1.0 : -1.0) * std::exp(c(0));
  out.predicted = predicted_leading_coefficient(d, xi);
  out.samples = samples;
  return out;
}

namespace {

nlohmann::json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

}  // namespace

nlohmann::json to_json(const HarmonicDecomposition& d) {
  nlohmann::json modes = nlohmann::json::array();
  for (const ModeFit& m : d.modes) {
    modes.push_back({{"k", m.k},
                     {"c_cos", num(m.c_cos)},
                     {"c_sin", num(m.c_sin)},
                     {"amplitude", num(m.amplitude)},
                     {"threshold", num(m.threshold)},
                     {"retained", m.retained},
                     {"harmonicity_dev", num(m.harmonicity_dev)}});
  }
  nlohmann::json radii = nlohmann::json::array();
  for (double r : d.radii) radii.push_back(num(r));
  return {{"base", {num(d.base.x()), num(d.base.y())}},
          {"M", num(d.M)},
          {"lambda", {num(d.lambda(0)), num(d.lambda(1))}},
          {"rotation", num(d.rotation)},
          {"rho", num(d.rho)},
          {"radii", radii},
          {"low_mode_residual", num(d.low_mode_residual)},
          {"modes", modes},
          {"k_bar", d.k_bar ? nlohmann::json(*d.k_bar) : nlohmann::json(nullptr)}};
}

nlohmann::json to_json(const LeadingTermFit& fit) {
  return {{"exponent", num(fit.exponent)},
          {"coefficient", num(fit.coefficient)},
          {"predicted", num(fit.predicted)},
          {"samples", fit.samples}};
}

}  // namespace torsion
