#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "torsion/closed_forms.hpp"
#include "torsion/concavity.hpp"
#include "torsion/grid.hpp"
#include "torsion/harmonic.hpp"

using namespace torsion;

// Hand-rolled generators: a fixed seed per property, a fixed number of draws.

TEST_SUITE("properties") {
  TEST_CASE("random ellipses satisfy property (A) and show no modes") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ua(1.02, 1.9);
    std::uniform_real_distribution<double> uc(-0.5, 0.5);
    std::uniform_real_distribution<double> ur(0.5, 2.0);
    for (int trial = 0; trial < 8; ++trial) {
      const double a1 = ua(rng);
      const Point c(uc(rng), uc(rng));
      const double R = ur(rng);
      CAPTURE(a1);
      CAPTURE(R);
      const EvaluableField f = EvaluableField::analytic(ellipsoid_torsion(c, Vec2(a1, 2 - a1), R));
      ConcavityOptions o;
      o.midpoint_pairs = 2000;
      CHECK(property_A_check(f, o).verdict == Verdict::Holds);
      CHECK_FALSE(decompose(f).k_bar);
    }
  }

  TEST_CASE("the solution minimises the Rayleigh quotient among admissible fields") {
    const SolveResult r = solve_torsion(std::make_shared<const GridMask>(build_grid(Domain::paper_triangle(), 1.0 / 32)));
    const double rq = rayleigh_quotient(r.field);
    const GridMask& m = r.field.mask();
    std::mt19937_64 rng(12);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::uniform_real_distribution<double> pos(-1.5, 0.8);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> w(r.field.values().begin(), r.field.values().end());
      const Point c(pos(rng), 0.5 * pos(rng));
      const double amp = 0.05 * n01(rng);
      const double width = 0.02 + 0.2 * std::abs(n01(rng));
      for (int node : m.node_of) {
        const Point p = m.position(node) - c;
        w[static_cast<std::size_t>(node)] += amp * std::exp(-p.squaredNorm() / width) + 1e-3 * n01(rng);
      }
      CHECK(rayleigh_quotient(GridField(r.field.shared_mask(), w)) >= rq);
    }
  }

  TEST_CASE("grid jets agree with closed-form jets at random interior points") {
    const SmoothField u = ellipsoid_torsion(Point(0.1, 0), Vec2(1.3, 0.7), 1.0);
    const EvaluableField g =
        EvaluableField::from_grid(sample_on_grid(std::make_shared<const GridMask>(build_grid(*u.domain(), 1.0 / 64)), u));
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ux(-1.0, 1.0);
    int tested = 0;
    while (tested < 40) {
      const Point x(ux(rng), ux(rng));
      if (!u.domain()->contains(x) || u.domain()->distance_to_boundary(x) < g.jet_margin()) continue;
      ++tested;
      const Jet2 j = g.jet(x);
      const Jet a = u.jet(Eigen::VectorXd(x));
      CHECK(std::abs(j.value - a.value) < 1e-6);
      CHECK((j.gradient - Vec2(a.gradient)).norm() < 1e-4);
      CHECK((j.hessian - Eigen::Matrix2d(a.hessian)).cwiseAbs().maxCoeff() < 1e-3);
    }
  }

  TEST_CASE("radial jet is consistent with the planar jet") {
    const EvaluableField t = EvaluableField::analytic(triangle_torsion());
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> ang(0.0, 2 * oracle::kPi);
    std::uniform_real_distribution<double> rad(0.0, 0.4);
    for (int trial = 0; trial < 30; ++trial) {
      const Vec2 xi(std::cos(ang(rng)), std::sin(ang(rng)));
      const Vec2 unit = xi.normalized();
      const double r = rad(rng);
      const Point x = t.argmax() + r * unit;
      const RadialJet rj = radial_jet(t, t.argmax(), xi, r);
      const Jet2 j = t.jet(x);
      CHECK(rj.v == doctest::Approx(t.max_value() - j.value));
      CHECK(rj.v_r == doctest::Approx(-j.gradient.dot(unit)));
      CHECK(rj.v_rr == doctest::Approx(-unit.dot(j.hessian * unit)));
    }
  }

  TEST_CASE("verdict does not depend on translating the domain") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> uc(-3.0, 3.0);
    for (int trial = 0; trial < 3; ++trial) {
      const Point c(uc(rng), uc(rng));
      const EvaluableField f = EvaluableField::analytic(ellipsoid_torsion(c, Vec2(1.5, 0.5), 1.0));
      CHECK(is_power_concave(f, 1.0).verdict == Verdict::Holds);
      CHECK(is_power_concave(f, 1.1).verdict != Verdict::Holds);
    }
  }
}
