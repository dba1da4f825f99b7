#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "oracles.hpp"
#include "torsion/closed_forms.hpp"
#include "torsion/errors.hpp"

using namespace torsion;

namespace {

// Jet agreement with central differences of the value at random points.
void check_jet_by_differences(const SmoothField& u, std::uint64_t seed) {
  const Domain& d = *u.domain();
  const BoundingBox box = d.bounds();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.lo.x(), box.hi.x());
  std::uniform_real_distribution<double> uy(box.lo.y(), box.hi.y());
  int tested = 0;
  while (tested < 50) {
    const Point x(ux(rng), uy(rng));
    if (!d.contains(x)) continue;
    ++tested;
    const Jet j = u.jet(Eigen::VectorXd(x));
    const double s = 1e-5;
    for (int a = 0; a < 2; ++a) {
      const Vec2 e = a == 0 ? Vec2(1, 0) : Vec2(0, 1);
      auto line = [&](double t) { return u.value(Point(x + t * e)); };
      const double g = oracle::d1(line, 0.0, s);
      CHECK(std::abs(g - j.gradient(a)) <= 1e-8 * std::max(1.0, std::abs(j.gradient(a))));
      const double h2 = oracle::d2(line, 0.0, 1e-3);
      CHECK(std::abs(h2 - j.hessian(a, a)) <= 1e-5 * std::max(1.0, std::abs(j.hessian(a, a))));
    }
    // Mixed derivative along the diagonal.
    const Vec2 e(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
    auto diag = [&](double t) { return u.value(Point(x + t * e)); };
    const double dd = oracle::d2(diag, 0.0, 1e-3);
    CHECK(std::abs(dd - e.dot(j.hessian * e)) <= 1e-5);
  }
}

}  // namespace

TEST_SUITE("closed_forms") {
  TEST_CASE("ball torsion values") {
    CHECK(ball_torsion(Point(0, 0), 1.0).value(Point(0, 0)) == doctest::Approx(0.25));
    const SmoothField b3 = ball_torsion(Eigen::VectorXd::Zero(3), 2.0, 3);
    CHECK(b3.jet(Eigen::VectorXd::Zero(3)).value == doctest::Approx(2.0 / 3.0));
    CHECK(ball_torsion(Point(1, 1), 1.0).value(Point(1.6, 1.8)) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(ball_torsion(Point(0, 0), -1.0), InvalidArgument);
  }

  TEST_CASE("ball jet: gradient -(x - c)/n, Hessian -I/n") {
    const SmoothField b = ball_torsion(Point(0, 0), 1.0);
    const Jet j = b.jet(Eigen::Vector2d(0.3, 0.4));
    CHECK(j.gradient(0) == doctest::Approx(-0.15));
    CHECK(j.gradient(1) == doctest::Approx(-0.2));
    CHECK(j.hessian(0, 0) == doctest::Approx(-0.5));
    CHECK(j.hessian(1, 1) == doctest::Approx(-0.5));
    CHECK(j.hessian(0, 1) == 0.0);
    const SmoothField b4 = ball_torsion(Eigen::VectorXd::Zero(4), 1.0, 4);
    CHECK(b4.jet(Eigen::VectorXd::Constant(4, 0.1)).hessian.trace() == doctest::Approx(-1.0));
  }

  TEST_CASE("ellipsoid torsion") {
    const SmoothField e = ellipsoid_torsion(Point(0, 0), Vec2(1.5, 0.5), 1.0);
    CHECK(e.value(Point(0, 0)) == doctest::Approx(0.25));
    CHECK_THROWS_AS(ellipsoid_torsion(Point(0, 0), Vec2(1.5, 0.6), 1.0), InvalidArgument);
    CHECK_THROWS_AS(ellipsoid_torsion(Point(0, 0), Vec2(2.5, -0.5), 1.0), InvalidArgument);

    const SmoothField same = ellipsoid_torsion(Point(0.2, 0), Vec2(1, 1), 1.0);
    const SmoothField ball = ball_torsion(Point(0.2, 0), 1.0);
    for (double x = -0.7; x < 1.1; x += 0.13) {
      for (double y = -0.9; y < 0.9; y += 0.11) {
        CHECK(std::abs(same.value(Point(x, y)) - ball.value(Point(x, y))) <= 1e-15);
      }
    }
    const SmoothField e3 = ellipsoid_torsion(Eigen::VectorXd(Eigen::VectorXd::Zero(3)), Eigen::VectorXd(Eigen::Vector3d(0.5, 1.0, 1.5)), 1.0);
    CHECK(e3.jet(Eigen::Vector3d(0.1, 0.2, 0.3)).hessian.trace() == doctest::Approx(-1.0));
  }

  TEST_CASE("triangle torsion") {
    const SmoothField t = triangle_torsion();
    const Jet j0 = t.jet(Eigen::Vector2d(0, 0));
    CHECK(j0.value == doctest::Approx(1.0 / 3.0));
    CHECK(j0.hessian.determinant() == doctest::Approx(0.25));
    CHECK(t.value(Point(-2, 0)) == doctest::Approx(0.0).epsilon(1e-15));
    for (double x = -1.5; x < 1; x += 0.25) {
      for (double y = -0.5; y < 0.6; y += 0.25) {
        const Jet j = t.jet(Eigen::Vector2d(x, y));
        CHECK(j.hessian.trace() == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(j.hessian.determinant() == doctest::Approx((1 - x * x - y * y) / 4));
      }
    }
  }

  TEST_CASE("torsion functions vanish on the boundary") {
    for (const SmoothField& u : {ball_torsion(Point(0.3, -0.2), 1.3), ellipsoid_torsion(Point(0, 0), Vec2(1.8, 0.2), 1.0),
                                 triangle_torsion()}) {
      const auto poly = u.domain()->boundary_polyline(512);
      for (std::size_t k = 0; k < poly.size(); ++k) {
        // Mid-edge points for polygons, vertices for conics.
        const Point p = poly.size() == 3 ? Point(0.3 * poly[k] + 0.7 * poly[(k + 1) % 3]) : poly[k];
        CHECK(std::abs(u.value(p)) <= 1e-12);
      }
    }
  }

  TEST_CASE("ball and ellipsoid Hessians are negative definite") {
    const Jet jb = ball_torsion(Point(0, 0), 1.0).jet(Eigen::Vector2d(0.1, 0.1));
    const Jet je = ellipsoid_torsion(Point(0, 0), Vec2(1.8, 0.2), 1.0).jet(Eigen::Vector2d(0.1, 0.1));
    CHECK(jb.hessian.eigenvalues().real().maxCoeff() < 0.0);
    CHECK(je.hessian.eigenvalues().real().maxCoeff() < 0.0);
  }

  TEST_CASE("analytic jets agree with finite differences") {
    check_jet_by_differences(ball_torsion(Point(0.1, 0.2), 1.0), 1);
    check_jet_by_differences(ellipsoid_torsion(Point(0, 0), Vec2(1.2, 0.8), 1.0), 2);
    check_jet_by_differences(triangle_torsion(), 3);
  }

  TEST_CASE("dimension mismatch is rejected") {
    const SmoothField b = ball_torsion(Point(0, 0), 1.0);
    CHECK_THROWS_AS(b.jet(Eigen::VectorXd::Zero(3)), InvalidArgument);
  }
}
