#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "torsion/closed_forms.hpp"
#include "torsion/concavity.hpp"
#include "torsion/errors.hpp"
#include "torsion/grid.hpp"
#include "torsion/harmonic.hpp"

using namespace torsion;

namespace {

EvaluableField triangle_cf() { return EvaluableField::analytic(triangle_torsion()); }
EvaluableField ellipse_cf(Vec2 a = Vec2(1.5, 0.5)) {
  return EvaluableField::analytic(ellipsoid_torsion(Point(0, 0), a, 1.0));
}

const EvaluableField& square_field() {
  static const EvaluableField f = EvaluableField::from_solve(
      solve_torsion(std::make_shared<const GridMask>(build_grid(Domain::unit_square(), 1.0 / 64))));
  return f;
}

Vec2 dir(double t) { return Vec2(std::cos(t), std::sin(t)); }

// u_T plus eps r^5 cos 3 theta: still maximal at the origin, but the mode-3
// part of v is no longer a pure r^3.
SmoothField corrupted_triangle(double eps) {
  const SmoothField base = triangle_torsion();
  auto rule = [base, eps](const Eigen::VectorXd& p) {
    Jet j = base.jet(p);
    const double x = p(0);
    const double y = p(1);
    const double r2 = x * x + y * y;
    const double c3 = x * x * x - 3 * x * y * y;  // r^3 cos 3 theta
    j.value += eps * r2 * c3;
    j.gradient(0) += eps * (2 * x * c3 + r2 * (3 * x * x - 3 * y * y));
    j.gradient(1) += eps * (2 * y * c3 + r2 * (-6 * x * y));
    j.hessian(0, 0) += eps * (2 * c3 + 4 * x * (3 * x * x - 3 * y * y) + r2 * 6 * x);
    j.hessian(1, 1) += eps * (2 * c3 + 4 * y * (-6 * x * y) + r2 * (-6 * x));
    const double mixed = eps * (2 * x * (-6 * x * y) + 2 * y * (3 * x * x - 3 * y * y) + r2 * (-6 * y));
    j.hessian(0, 1) += mixed;
    j.hessian(1, 0) += mixed;
    return j;
  };
  return SmoothField(2, rule, Domain::paper_triangle(), "corrupted");
}

}  // namespace

TEST_SUITE("harmonic") {
  TEST_CASE("ellipse: lambda = a / 2 and no modes") {
    const HarmonicDecomposition d = decompose(ellipse_cf());
    CHECK(d.lambda(0) == doctest::Approx(0.75));
    CHECK(d.lambda(1) == doctest::Approx(0.25));
    CHECK(d.rotation == doctest::Approx(0.0));
    CHECK_FALSE(d.k_bar);
    for (const ModeFit& m : d.modes) CHECK(m.amplitude < m.threshold);
    CHECK(d.low_mode_residual < 1e-9);
    CHECK(harmonicity_check(d, 1e-3).empty());
  }

  TEST_CASE("rotated ellipse: eigenframe angle in [0, pi)") {
    // Ellipse a = (1.8, 0.2) rotated by 2.5 rad via a polygon would not be
    // a closed form; use a SmoothField with rotated axes instead.
    const double t = 2.5;
    const Eigen::Matrix2d R = (Eigen::Matrix2d() << std::cos(t), -std::sin(t), std::sin(t), std::cos(t)).finished();
    const Eigen::Matrix2d Q = R * Vec2(1.8, 0.2).asDiagonal() * R.transpose();
    std::vector<Point> poly;
    for (int k = 0; k < 720; ++k) {
      const double s = 2 * oracle::kPi * k / 720;
      poly.push_back(R * Point(std::cos(s) / std::sqrt(1.8), std::sin(s) / std::sqrt(0.2)));
    }
    auto rule = [Q](const Eigen::VectorXd& p) {
      const Eigen::Vector2d x = p;
      return Jet{(1.0 - x.dot(Q * x)) / 4, -Q * x / 2, -Q / 2};
    };
    const EvaluableField f = EvaluableField::analytic(SmoothField(2, rule, Domain::level_set(poly), "rotated"));
    const HarmonicDecomposition d = decompose(f);
    CHECK(d.lambda(0) == doctest::Approx(0.9));
    CHECK(d.lambda(1) == doctest::Approx(0.1));
    CHECK(d.rotation == doctest::Approx(t - oracle::kPi / 1.0 + oracle::kPi).epsilon(1e-9));
    CHECK(d.rotation >= 0.0);
    CHECK(d.rotation < oracle::kPi);
    CHECK_FALSE(d.k_bar);
  }

  TEST_CASE("triangle: k_bar = 3 with cosine amplitude 1/12") {
    const HarmonicDecomposition d = decompose(triangle_cf());
    CHECK(d.lambda(0) == doctest::Approx(0.5));
    CHECK(d.lambda(1) == doctest::Approx(0.5));
    REQUIRE(d.k_bar);
    CHECK(*d.k_bar == 3);
    CHECK(d.modes[3].c_cos == doctest::Approx(1.0 / 12).epsilon(1e-9));
    CHECK(std::abs(d.modes[3].c_sin) < 1e-12);
    for (const ModeFit& m : d.modes) {
      if (m.k != 3) CHECK(m.amplitude < m.threshold);
    }
    CHECK(d.low_mode_residual < 1e-9);
    const auto hc = harmonicity_check(d, 1e-3);
    REQUIRE(hc.size() == 1);
    CHECK(hc[0].k == 3);
    CHECK(hc[0].pass);
    CHECK(hc[0].deviation < 1e-3);
  }

  TEST_CASE("corrupted triangle fails the pure-power check for mode 3") {
    const HarmonicDecomposition d = decompose(EvaluableField::analytic(corrupted_triangle(1e-3)));
    REQUIRE(d.k_bar);
    CHECK(*d.k_bar == 3);
    const auto hc = harmonicity_check(d, 1e-3);
    REQUIRE_FALSE(hc.empty());
    CHECK_FALSE(hc[0].pass);
  }

  TEST_CASE("square: k_bar = 4, odd modes silent") {
    const HarmonicDecomposition d = decompose(square_field());
    CHECK(d.lambda.sum() == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(d.lambda(0) - d.lambda(1)) < 1e-3);
    REQUIRE(d.k_bar);
    CHECK(*d.k_bar == 4);
    CHECK(d.modes[3].amplitude < d.modes[3].threshold);
    CHECK(d.modes[5].amplitude < d.modes[5].threshold);
  }

  TEST_CASE("argument guards") {
    HarmonicOptions o;
    o.n_angles = 40;
    CHECK_THROWS_AS(decompose(triangle_cf(), o), InvalidArgument);
    o = HarmonicOptions{};
    o.n_radii = 2;
    CHECK_THROWS_AS(decompose(triangle_cf(), o), InvalidArgument);
  }

  TEST_CASE("radial sign quantity") {
    const EvaluableField e = ellipse_cf();
    for (double t : {0.0, 0.7, 2.0}) {
      for (double r : {0.05, 0.2, 0.4}) CHECK(std::abs(radial_sign_quantity(e, Point(0, 0), dir(t), r)) < 1e-15);
    }
    const EvaluableField t = triangle_cf();
    // -r^3/12 + r^4/48 and its mirror image.
    const double r = 0.05;
    CHECK(radial_sign_quantity(t, Point(0, 0), dir(oracle::kPi / 3), r) ==
          doctest::Approx(-r * r * r / 12 + r * r * r * r / 48).epsilon(1e-9));
    CHECK(radial_sign_quantity(t, Point(0, 0), dir(0.0), r) == doctest::Approx(r * r * r / 12 + r * r * r * r / 48).epsilon(1e-9));
  }

  TEST_CASE("leading term fit on the triangle matches the predicted coefficient") {
    const EvaluableField t = triangle_cf();
    const HarmonicDecomposition d = decompose(t);
    const LeadingTermFit m = leading_term_fit(t, d, dir(oracle::kPi / 3), 0.01, 0.1);
    CHECK(m.exponent == doctest::Approx(3.0).epsilon(0.1 / 3));
    // 2 A (k^2 - 3k + 2) z_3 with A = 1/4, z_3 = -1/12.
    CHECK(m.predicted == doctest::Approx(-1.0 / 12));
    CHECK(m.coefficient == doctest::Approx(-1.0 / 12).epsilon(0.1));
    const LeadingTermFit p = leading_term_fit(t, d, dir(0.0), 0.01, 0.1);
    CHECK(p.exponent == doctest::Approx(3.0).epsilon(0.1 / 3));
    CHECK(p.coefficient == doctest::Approx(1.0 / 12).epsilon(0.1));
  }

  TEST_CASE("leading term fit rejections") {
    const EvaluableField e = ellipse_cf();
    CHECK_THROWS_AS(leading_term_fit(e, decompose(e), dir(0.3), 0.01, 0.1), BelowNoiseFloor);
    // On u_T, q = c r^3/12 + c^2 r^4/48 with c = cos 3 theta: no sign change
    // below r = 4/|c|. The r^5 corruption adds about -5 eps c r^5, which flips
    // the sign at r^2 = 1/(60 eps).
    const EvaluableField t = triangle_cf();
    CHECK_NOTHROW(leading_term_fit(t, decompose(t), dir(oracle::kPi / 6 + 0.01), 0.01, 0.5));
    const EvaluableField c = EvaluableField::analytic(corrupted_triangle(0.1));
    CHECK_THROWS_AS(leading_term_fit(c, decompose(c), dir(oracle::kPi / 3), 0.01, 0.6), SignChange);
  }

  TEST_CASE("A(xi) and z_k(xi)") {
    const HarmonicDecomposition d = decompose(ellipse_cf());
    CHECK(d.A(Vec2(1, 0)) == doctest::Approx(0.375));
    CHECK(d.A(Vec2(0, 2)) == doctest::Approx(0.125));
    const HarmonicDecomposition t = decompose(triangle_cf());
    CHECK(t.z_mode(3, dir(oracle::kPi / 3)) == doctest::Approx(-1.0 / 12));
  }

  TEST_CASE("chain: detected mode implies a negative ray and property (A) failure") {
    for (const EvaluableField* f : {&square_field()}) {
      const HarmonicDecomposition d = decompose(*f);
      REQUIRE(d.k_bar);
      double qmin = 1.0;
      for (int k = 0; k < 64; ++k) qmin = std::min(qmin, radial_sign_quantity(*f, d.base, dir(2 * oracle::kPi * k / 64), d.rho / 4));
      CHECK(qmin < 0.0);
      CHECK(property_A_check(*f).verdict == Verdict::Fails);
    }
    const EvaluableField t = triangle_cf();
    const HarmonicDecomposition d = decompose(t);
    REQUIRE(d.k_bar);
    CHECK(radial_sign_quantity(t, d.base, dir(oracle::kPi / 3), d.rho / 4) < 0.0);
    CHECK(property_A_check(t).verdict == Verdict::Fails);
  }

  TEST_CASE("property (A) holds implies nonnegative rays") {
    const EvaluableField e = ellipse_cf(Vec2(1.2, 0.8));
    REQUIRE(property_A_check(e).verdict == Verdict::Holds);
    const HarmonicDecomposition d = decompose(e);
    for (int k = 0; k < 32; ++k) {
      for (double r : {d.rho / 8, d.rho / 2, d.rho}) {
        CHECK(radial_sign_quantity(e, d.base, dir(2 * oracle::kPi * k / 32), r) >= -1e-12);
      }
    }
  }

  TEST_CASE("JSON") {
    const nlohmann::json j = to_json(decompose(triangle_cf()));
    CHECK(j["k_bar"] == 3);
    CHECK(j["modes"].size() == 13);
    CHECK(j["lambda"].size() == 2);
    CHECK(to_json(decompose(ellipse_cf()))["k_bar"].is_null());
  }
}
