#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "torsion/concavity.hpp"
#include "torsion/harmonic.hpp"

namespace torsion {

/// Everything a CLI run depends on. `out` is where files go and is the only
/// field left out of the JSON embedded in the outputs.
struct RunConfig {
  /// disk | ellipse | square | paper-triangle, or empty when `domain` is set.
  std::string preset = "disk";
  std::optional<Domain> domain;
  Vec2 a = Vec2(1.5, 0.5);
  double h = 1.0 / 64.0;
  double solver_tol = 1e-10;
  /// auto | closed-form | solved
  std::string source = "auto";

  std::vector<std::string> checks;
  double margin = 0.0;
  double concavity_tol = 0.0;
  int midpoint_pairs = 10'000;
  double alpha = 1.1;
  double epsilon = 1e-3;
  double bisection_tol = 0.02;
  std::optional<Point> local_x0;
  double local_radius = 0.0;

  HarmonicOptions harmonic;
  std::uint64_t seed = 20'240'601;
  std::string out = ".";
};

extern const std::vector<std::string> kPresets;
extern const std::vector<std::string> kChecks;

/// Throws InvalidArgument on unknown keys, bad values or non-positive
/// tolerances.
void validate(const RunConfig& config);
/// Applies the keys present in `j` on top of `config`.
void apply_json(RunConfig& config, const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);

Domain resolve_domain(const RunConfig& config);

struct RunOutcome {
  nlohmann::json document;
  /// 0 clean, 1 a check reported a violation.
  int status = 0;
};

/// Writes summary.json and field.csv into config.out.
RunOutcome run_solve(const RunConfig& config);
/// Writes report.json.
RunOutcome run_analyze(const RunConfig& config);
/// Writes harmonic.json.
RunOutcome run_harmonic(const RunConfig& config);

/// Two-space indented dump with a trailing newline.
std::string render(const nlohmann::json& j);

}  // namespace torsion
