// One PASS/FAIL line per acceptance criterion; nonzero exit if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "torsion/closed_forms.hpp"
#include "torsion/concavity.hpp"
#include "torsion/errors.hpp"
#include "torsion/grid.hpp"
#include "torsion/harmonic.hpp"
#include "torsion/pipeline.hpp"

using namespace torsion;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "!") + what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SolveResult solve(const Domain& d, double h) { return solve_torsion(std::make_shared<const GridMask>(build_grid(d, h))); }

double max_node_error(const SolveResult& r, const SmoothField& u) {
  double e = 0.0;
  const GridMask& m = r.field.mask();
  for (int node : m.node_of) e = std::max(e, std::abs(r.field.at(node) - u.value(m.position(node))));
  return e;
}

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const SolveResult& disk64() {
  static const SolveResult r = solve(Domain::disk(Point(0, 0), 1.0), 1.0 / 64);
  return r;
}
const SolveResult& square64() {
  static const SolveResult r = solve(Domain::unit_square(), 1.0 / 64);
  return r;
}
const SolveResult& ellipse64() {
  static const SolveResult r = solve(Domain::ellipse(Point(0, 0), Vec2(1.5, 0.5), 1.0), 1.0 / 64);
  return r;
}
const SolveResult& triangle64() {
  static const SolveResult r = solve(Domain::paper_triangle(), 1.0 / 64);
  return r;
}

EvaluableField disk_cf() { return EvaluableField::analytic(ball_torsion(Point(0, 0), 1.0)); }
EvaluableField ellipse_cf(Vec2 a) { return EvaluableField::analytic(ellipsoid_torsion(Point(0, 0), a, 1.0)); }
EvaluableField triangle_cf() { return EvaluableField::analytic(triangle_torsion()); }

Vec2 dir(double t) { return Vec2(std::cos(t), std::sin(t)); }

Outcome c1() {
  Outcome o;
  std::optional<SolveResult> d;
  const double td = seconds([&] { d = solve(Domain::disk(Point(0, 0), 1.0), 1.0 / 128); });
  const double ed = max_node_error(*d, ball_torsion(Point(0, 0), 1.0));
  o.require(ed <= 5e-4, fmt("disk h=1/128 err %.3e", ed));
  std::optional<SolveResult> t;
  const double tt = seconds([&] { t = solve(Domain::paper_triangle(), 1.0 / 64); });
  const double et = max_node_error(*t, triangle_torsion());
  o.require(et <= 1e-3, fmt("triangle err %.3e", et));
  o.require(td < 30 && tt < 30, fmt("slowest solve %.2fs", std::max(td, tt)));
  return o;
}

Outcome c2() {
  Outcome o;
  const SmoothField u = ball_torsion(Point(0, 0), 1.0);
  const double e32 = max_node_error(solve(Domain::disk(Point(0, 0), 1.0), 1.0 / 32), u);
  const double e64 = max_node_error(disk64(), u);
  const double ratio = e32 / e64;
  o.require(ratio >= 3.5 && ratio <= 4.5, fmt("error ratio %.4f", ratio));
  return o;
}

Outcome c3() {
  Outcome o;
  const double t1 = torsional_rigidity(disk64());
  const double t2 = torsional_rigidity(solve(Domain::disk(Point(0, 0), 2.0), 1.0 / 32));
  const double rel = std::abs(t1 / (oracle::kPi / 8) - 1);
  o.require(rel <= 1e-3, fmt("tau rel err %.2e", rel));
  const double scale = std::abs(t2 / t1 / 16 - 1);
  o.require(scale <= 1e-3, fmt("R-doubling rel err %.2e", scale));
  const double rq = rayleigh_quotient(disk64().field) * t1;
  o.require(std::abs(rq - 1) <= 1e-2, fmt("RQ*tau %.5f", rq));
  return o;
}

Outcome c4() {
  Outcome o;
  const double series = oracle::square_u(0, 0);
  const double M = square64().M;
  o.require(std::abs(series - 0.29469) <= 1e-5, fmt("series %.9f", series));
  o.require(std::abs(M - series) <= 1e-3, fmt("M %.6f", M));
  return o;
}

Outcome c5() {
  Outcome o;
  const std::pair<const char*, const SolveResult*> cases[] = {
      {"disk", &disk64()}, {"ellipse", &ellipse64()}, {"square", &square64()}, {"triangle", &triangle64()}};
  for (const auto& [name, r] : cases) {
    const ConcavityReport rep = is_power_concave(EvaluableField::from_solve(*r), 0.5);
    o.require(rep.verdict == Verdict::Holds, std::string(name) + " " + to_string(rep.verdict));
  }
  return o;
}

Outcome c6() {
  Outcome o;
  const std::pair<const char*, EvaluableField> smooth[] = {{"disk", disk_cf()}, {"ellipse", ellipse_cf(Vec2(1.5, 0.5))}};
  for (const auto& [name, f] : smooth) {
    const ExponentBracket b = concavity_exponent(f, 0.02);
    o.require(b.lo <= 1 && b.hi >= 1 && b.hi - b.lo <= 0.02,
              std::string(name) + fmt(" [%.4f", b.lo) + fmt(", %.4f]", b.hi));
  }
  const std::pair<const char*, EvaluableField> corner[] = {{"square", EvaluableField::from_solve(square64())},
                                                           {"triangle", triangle_cf()}};
  for (const auto& [name, f] : corner) {
    const ExponentBracket b = concavity_exponent(f, 0.02);
    o.require(b.lo >= 0.48 && b.hi <= 1.02, std::string(name) + fmt(" [%.4f", b.lo) + fmt(", %.4f]", b.hi));
  }
  bool monotone = true;
  for (const EvaluableField& f : {disk_cf(), ellipse_cf(Vec2(1.5, 0.5)), EvaluableField::from_solve(square64()), triangle_cf()}) {
    bool failed = false;
    for (int k = 5; k <= 11; ++k) {
      const bool holds = is_power_concave(f, 0.1 * k).verdict == Verdict::Holds;
      if (failed && holds) monotone = false;
      if (!holds) failed = true;
    }
  }
  o.require(monotone, "monotone in alpha");
  const LevelSetBound lb = level_set_bound_check(disk64(), 1.1, 1e-3);
  o.require(lb.bracket > 0 && std::abs(lb.bracket / 0.149 - 1) <= 0.1, fmt("level-set bracket %.4f", lb.bracket));
  return o;
}

Outcome c7() {
  Outcome o;
  o.require(property_A_check(disk_cf()).verdict == Verdict::Holds, "disk");
  for (const Vec2& a : {Vec2(1.2, 0.8), Vec2(1.5, 0.5), Vec2(1.8, 0.2)}) {
    const ConcavityReport r = property_A_check(ellipse_cf(a));
    o.require(r.verdict == Verdict::Holds, fmt("ellipse a1=%.1f ", a.x()) + to_string(r.verdict));
  }
  const std::pair<const char*, EvaluableField> bad[] = {{"square", EvaluableField::from_solve(square64())},
                                                        {"triangle", triangle_cf()}};
  for (const auto& [name, f] : bad) {
    const ConcavityReport r = property_A_check(f);
    const bool certified = r.verdict == Verdict::Fails && r.witness && r.witness->violation > 10 * r.tol;
    o.require(certified, std::string(name) + fmt(" violation/tol %.1f", r.worst_violation / r.tol));
  }
  return o;
}

Outcome c8() {
  Outcome o;
  const EvaluableField t = triangle_cf();
  const HarmonicDecomposition d = decompose(t);
  o.require(std::abs(d.lambda(0) - 0.5) <= 1e-3 && std::abs(d.lambda(1) - 0.5) <= 1e-3,
            fmt("lambda (%.4f", d.lambda(0)) + fmt(", %.4f)", d.lambda(1)));
  o.require(d.k_bar && *d.k_bar == 3, "k_bar " + (d.k_bar ? std::to_string(*d.k_bar) : std::string("none")));
  o.require(std::abs(d.modes[3].c_cos - 1.0 / 12) <= 1e-3, fmt("c3 %.6f", d.modes[3].c_cos));
  bool others = true;
  for (const ModeFit& m : d.modes) {
    if (m.k != 3 && m.amplitude >= m.threshold) others = false;
  }
  o.require(others, "other modes below threshold");
  o.require(d.modes[3].harmonicity_dev < 1e-3, fmt("mode-3 deviation %.2e", d.modes[3].harmonicity_dev));
  try {
    const LeadingTermFit fit = leading_term_fit(t, d, dir(oracle::kPi / 3), 0.01, 0.1);
    o.require(std::abs(fit.exponent - 3) <= 0.1, fmt("exponent %.4f", fit.exponent));
    o.require(std::abs(fit.coefficient / (-1.0 / 6) - 1) <= 0.1, fmt("coefficient %.5f vs -1/6", fit.coefficient));
  } catch (const Error& e) {
    o.require(false, std::string("fit rejected: ") + e.what());
  }
  const HarmonicDecomposition e = decompose(ellipse_cf(Vec2(1.5, 0.5)));
  bool null = true;
  for (const ModeFit& m : e.modes) {
    if (m.amplitude >= m.threshold) null = false;
  }
  o.require(null, "ellipse modes below threshold");
  return o;
}

Outcome c9() {
  Outcome o;
  const EvaluableField f = EvaluableField::from_solve(square64());
  const HarmonicDecomposition d = decompose(f);
  o.require(d.k_bar && *d.k_bar == 4, "k_bar " + (d.k_bar ? std::to_string(*d.k_bar) : std::string("none")));
  o.require(d.modes[3].amplitude < d.modes[3].threshold && d.modes[5].amplitude < d.modes[5].threshold,
            "modes 3, 5 below threshold");
  double qmin = 0.0;
  for (int k = 0; k < 64; ++k) qmin = std::min(qmin, radial_sign_quantity(f, d.base, dir(2 * oracle::kPi * k / 64), d.rho / 4));
  o.require(qmin < 0, fmt("min radial sign quantity %.3e", qmin));
  o.require(property_A_check(f).verdict == Verdict::Fails, "property (A) fails");
  return o;
}

Outcome c10() {
  Outcome o;
  const GradientStats d = boundary_gradient_stats(disk64());
  o.require(d.spread < 1e-2, fmt("disk spread %.2e", d.spread));
  o.require(std::abs(d.mean - 0.5) <= 5e-3, fmt("disk mean %.5f", d.mean));
  const GradientStats s = boundary_gradient_stats(square64());
  o.require(s.spread > 0.5, fmt("square spread %.3f", s.spread));
  return o;
}

Outcome c11() {
  Outcome o;
  const EvaluableField e = ellipse_cf(Vec2(1.5, 0.5));
  const double radius = 0.1;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> ux(-0.8, 0.8);
  std::uniform_real_distribution<double> uy(-1.4, 1.4);
  int tested = 0;
  int held = 0;
  while (tested < 5) {
    const Point x(ux(rng), uy(rng));
    if (!e.domain().contains(x) || e.domain().distance_to_boundary(x) < 1.5 * radius) continue;
    ++tested;
    if (local_property_A_check(e, x, radius).verdict == Verdict::Holds) ++held;
  }
  o.require(held == 5, std::to_string(held) + "/5 ellipse points hold");
  const ConcavityReport t = local_property_A_check(triangle_cf(), Point(0, 0), 0.25);
  o.require(t.verdict == Verdict::Fails && t.witness && t.witness->violation > 10 * t.tol,
            fmt("triangle violation/tol %.1f", t.worst_violation / t.tol));
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome c12() {
  Outcome o;
  RunConfig c;
  c.preset = "square";
  c.h = 1.0 / 32;
  const fs::path root = fs::temp_directory_path() / "torsion_lab_acceptance";
  fs::remove_all(root);
  for (const char* run : {"a", "b"}) {
    c.out = (root / run).string();
    fs::create_directories(c.out);
    run_solve(c);
    run_analyze(c);
    run_harmonic(c);
  }
  for (const char* file : {"summary.json", "report.json", "harmonic.json", "field.csv"}) {
    o.require(slurp(root / "a" / file) == slurp(root / "b" / file), std::string(file) + " identical");
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"solver matches closed forms", c1},
      {"second-order convergence on the disk", c2},
      {"torsional rigidity and Rayleigh identity", c3},
      {"square maximum vs series", c4},
      {"sqrt-concavity of solved fields", c5},
      {"concavity exponent brackets and level-set bound", c6},
      {"property (A) separates ellipses", c7},
      {"triangle harmonic decomposition", c8},
      {"square symmetry modes", c9},
      {"boundary gradient diagnostic", c10},
      {"local property (A)", c11},
      {"deterministic pipeline output", c12},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
