// torsion_lab: solve, analyze and decompose torsion functions of convex
// planar domains. Exit status 0 ok, 1 violation found, 2 usage or config
// error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "torsion/errors.hpp"
#include "torsion/pipeline.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kNumerical = 3;

struct Flags {
  std::string preset;
  std::vector<double> a;
  double h = 0.0;
  double tol = 0.0;
  double margin = 0.0;
  double concavity_tol = 0.0;
  std::vector<std::string> checks;
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::string source;
  double alpha = 0.0;
  double epsilon = 0.0;
  std::vector<double> x0;
  double radius = 0.0;
};

void add_common(CLI::App* cmd, Flags& f) {
  // -h would clash with --h, the grid spacing.
  cmd->set_help_flag("--help", "print this help and exit");
  cmd->add_option("--preset", f.preset, "disk | ellipse | square | paper-triangle")
      ->check(CLI::IsMember(torsion::kPresets));
  cmd->add_option("--a", f.a, "ellipse coefficients a1,a2 (sum 2)")->delimiter(',')->expected(2);
  cmd->add_option("--h", f.h, "grid spacing");
  cmd->add_option("--tol", f.tol, "solver residual tolerance");
  cmd->add_option("--config", f.config, "JSON config; flags override it");
  cmd->add_option("--seed", f.seed, "RNG seed for midpoint sampling");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--source", f.source, "auto | closed-form | solved")
      ->check(CLI::IsMember({"auto", "closed-form", "solved"}));
}

torsion::RunConfig resolve(CLI::App* cmd, const Flags& f) {
  torsion::RunConfig c;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw torsion::InvalidArgument("cannot read config file " + f.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw torsion::InvalidArgument(std::string("config file: ") + e.what());
    }
    torsion::apply_json(c, j);
  }
  auto given = [cmd](const char* name) { return cmd->get_option_no_throw(name) && cmd->count(name) > 0; };
  if (given("--preset")) {
    c.preset = f.preset;
    c.domain.reset();
  }
  if (given("--a")) c.a = torsion::Vec2(f.a[0], f.a[1]);
  if (given("--h")) c.h = f.h;
  if (given("--tol")) c.solver_tol = f.tol;
  if (given("--seed")) c.seed = f.seed;
  if (given("--out")) c.out = f.out;
  if (given("--source")) c.source = f.source;
  if (given("--margin")) c.margin = f.margin;
  if (given("--concavity-tol")) c.concavity_tol = f.concavity_tol;
  if (given("--check")) c.checks = f.checks;
  if (given("--alpha")) c.alpha = f.alpha;
  if (given("--epsilon")) c.epsilon = f.epsilon;
  if (given("--x0")) c.local_x0 = torsion::Point(f.x0[0], f.x0[1]);
  if (given("--radius")) c.local_radius = f.radius;
  torsion::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Torsion functions of planar convex domains"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  Flags f;

  CLI::App* solve = app.add_subcommand("solve", "solve on a grid; writes summary.json and field.csv");
  add_common(solve, f);

  CLI::App* analyze = app.add_subcommand("analyze", "concavity checks; writes report.json");
  add_common(analyze, f);
  analyze->add_option("--check", f.checks, "alpha-star | power-concave | property-a | local-property-a | serrin | level-set-bound")
      ->check(CLI::IsMember(torsion::kChecks));
  analyze->add_option("--margin", f.margin, "boundary margin for Hessian samples");
  analyze->add_option("--concavity-tol", f.concavity_tol, "violation tolerance");
  analyze->add_option("--alpha", f.alpha, "exponent for power-concave and level-set-bound");
  analyze->add_option("--epsilon", f.epsilon, "level for level-set-bound");
  analyze->add_option("--x0", f.x0, "centre for local-property-a")->delimiter(',')->expected(2);
  analyze->add_option("--radius", f.radius, "radius for local-property-a");

  CLI::App* harmonic = app.add_subcommand("harmonic", "harmonic decomposition; writes harmonic.json");
  add_common(harmonic, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    torsion::RunOutcome r;
    if (solve->parsed()) {
      r = torsion::run_solve(resolve(solve, f));
    } else if (analyze->parsed()) {
      r = torsion::run_analyze(resolve(analyze, f));
    } else {
      r = torsion::run_harmonic(resolve(harmonic, f));
    }
    std::cout << torsion::render(r.document);
    return r.status;
  } catch (const torsion::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
}
