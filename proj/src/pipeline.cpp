#include "torsion/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "torsion/closed_forms.hpp"
#include "torsion/errors.hpp"
#include "torsion/format.hpp"
#include "torsion/grid.hpp"

namespace torsion {

const std::vector<std::string> kPresets{"disk", "ellipse", "square", "paper-triangle"};
const std::vector<std::string> kChecks{"alpha-star", "power-concave", "property-a", "local-property-a", "serrin",
                                       "level-set-bound"};

namespace {

constexpr double kPi = 3.14159265358979323846;

bool member(const std::vector<std::string>& set, const std::string& s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

nlohmann::json pt(const Point& p) { return {round12(p.x()), round12(p.y())}; }

Point point_from(const nlohmann::json& j, const char* key) {
  if (!j.is_array() || j.size() != 2) throw InvalidArgument(std::string(key) + " must be a pair of numbers");
  return Point(j[0].get<double>(), j[1].get<double>());
}

void write_file(const RunConfig& config, const std::string& name, const std::string& text) {
  const std::filesystem::path dir(config.out);
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw Error("cannot open " + (dir / name).string() + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + (dir / name).string());
}

std::optional<SmoothField> closed_form(const RunConfig& config) {
  if (!config.domain && config.preset == "paper-triangle") return triangle_torsion();
  const Domain d = resolve_domain(config);
  if (const auto* disk = std::get_if<Disk>(&d.shape())) return ball_torsion(disk->center, disk->R);
  if (const auto* e = std::get_if<Ellipse>(&d.shape())) return ellipsoid_torsion(e->center, e->a, e->R);
  return std::nullopt;
}

SolveResult solve(const RunConfig& config) {
  auto mask = std::make_shared<const GridMask>(build_grid(resolve_domain(config), config.h));
  SolverOptions opts;
  opts.tol = config.solver_tol;
  return solve_torsion(mask, opts);
}

// The field the analyses run on, plus the solve when one was needed.
struct Subject {
  EvaluableField field;
  std::optional<SolveResult> solved;
  std::optional<SmoothField> smooth;
  std::string source;
};

Subject subject(const RunConfig& config) {
  std::optional<SmoothField> cf;
  if (config.source != "solved") cf = closed_form(config);
  if (config.source == "closed-form" && !cf) throw InvalidArgument("no closed form is available for this domain");
  if (cf) return Subject{EvaluableField::analytic(*cf), std::nullopt, cf, "closed-form"};
  SolveResult r = solve(config);
  EvaluableField f = EvaluableField::from_solve(r);
  return Subject{std::move(f), std::move(r), std::nullopt, "solved"};
}

nlohmann::json field_json(const Subject& s) {
  nlohmann::json j{{"source", s.source}, {"M", round12(s.field.max_value())}, {"argmax", pt(s.field.argmax())}};
  if (s.solved) j["solve"] = summary_json(*s.solved);
  return j;
}

ConcavityOptions concavity_options(const RunConfig& c) {
  ConcavityOptions o;
  o.margin = c.margin;
  o.tol = c.concavity_tol;
  o.midpoint_pairs = c.midpoint_pairs;
  o.seed = c.seed;
  return o;
}

}  // namespace

void validate(const RunConfig& c) {
  if (!c.domain && !member(kPresets, c.preset)) throw InvalidArgument("unknown preset '" + c.preset + "'");
  if (c.source != "auto" && c.source != "closed-form" && c.source != "solved") {
    throw InvalidArgument("source must be auto, closed-form or solved");
  }
  for (const auto& k : c.checks) {
    if (!member(kChecks, k)) throw InvalidArgument("unknown check '" + k + "'");
  }
  if (!(c.h > 0.0)) throw InvalidArgument("h must be positive");
  if (!(c.solver_tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  if (c.margin < 0.0 || c.concavity_tol < 0.0) throw InvalidArgument("margin and tolerance must be non-negative");
  if (c.midpoint_pairs < 0) throw InvalidArgument("midpoint pair count must be non-negative");
  if (!(c.bisection_tol > 0.0)) throw InvalidArgument("bisection tolerance must be positive");
  if (!(c.epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (!(c.alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (c.local_radius < 0.0) throw InvalidArgument("local radius must be non-negative");
}

void apply_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "preset") {
        if (v.is_null()) {
          c.preset.clear();
        } else {
          c.preset = v.get<std::string>();
          c.domain.reset();
        }
      } else if (key == "domain") {
        if (v.is_null()) {
          c.domain.reset();
        } else {
          c.domain = domain_from_json(v);
        }
      } else if (key == "a") {
        c.a = point_from(v, "a");
      } else if (key == "h") {
        c.h = v.get<double>();
      } else if (key == "solver_tol") {
        c.solver_tol = v.get<double>();
      } else if (key == "source") {
        c.source = v.get<std::string>();
      } else if (key == "checks") {
        c.checks = v.get<std::vector<std::string>>();
      } else if (key == "margin") {
        c.margin = v.get<double>();
      } else if (key == "concavity_tol") {
        c.concavity_tol = v.get<double>();
      } else if (key == "midpoint_pairs") {
        c.midpoint_pairs = v.get<int>();
      } else if (key == "alpha") {
        c.alpha = v.get<double>();
      } else if (key == "epsilon") {
        c.epsilon = v.get<double>();
      } else if (key == "bisection_tol") {
        c.bisection_tol = v.get<double>();
      } else if (key == "local_x0") {
        if (v.is_null()) {
          c.local_x0.reset();
        } else {
          c.local_x0 = point_from(v, "local_x0");
        }
      } else if (key == "local_radius") {
        c.local_radius = v.get<double>();
      } else if (key == "harmonic") {
        if (!v.is_object()) throw InvalidArgument("harmonic must be an object");
        for (const auto& [hk, hv] : v.items()) {
          if (hk == "n_radii") {
            c.harmonic.n_radii = hv.get<int>();
          } else if (hk == "n_angles") {
            c.harmonic.n_angles = hv.get<int>();
          } else if (hk == "max_mode") {
            c.harmonic.max_mode = hv.get<int>();
          } else if (hk == "rho_factor") {
            c.harmonic.rho_factor = hv.get<double>();
          } else {
            throw InvalidArgument("unknown harmonic key '" + hk + "'");
          }
        }
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "out") {
        c.out = v.get<std::string>();
      } else if (key == "command") {
        // Present in embedded configs; the CLI subcommand decides.
      } else {
        throw InvalidArgument("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json checks = c.checks;
  return {{"preset", c.domain ? nlohmann::json(nullptr) : nlohmann::json(c.preset)},
          {"domain", to_json(resolve_domain(c))},
          {"a", pt(c.a)},
          {"h", round12(c.h)},
          {"solver_tol", round12(c.solver_tol)},
          {"source", c.source},
          {"checks", checks},
          {"margin", round12(c.margin)},
          {"concavity_tol", round12(c.concavity_tol)},
          {"midpoint_pairs", c.midpoint_pairs},
          {"alpha", round12(c.alpha)},
          {"epsilon", round12(c.epsilon)},
          {"bisection_tol", round12(c.bisection_tol)},
          {"local_x0", c.local_x0 ? pt(*c.local_x0) : nlohmann::json(nullptr)},
          {"local_radius", round12(c.local_radius)},
          {"harmonic",
           {{"n_radii", c.harmonic.n_radii},
            {"n_angles", c.harmonic.n_angles},
            {"max_mode", c.harmonic.max_mode},
            {"rho_factor", round12(c.harmonic.rho_factor)}}},
          {"seed", c.seed}};
}

Domain resolve_domain(const RunConfig& c) {
  if (c.domain) return *c.domain;
  if (c.preset == "disk") return Domain::disk(Point::Zero(), 1.0);
  if (c.preset == "ellipse") return Domain::ellipse(Point::Zero(), c.a, 1.0);
  if (c.preset == "square") return Domain::unit_square();
  if (c.preset == "paper-triangle") return Domain::paper_triangle();
  throw InvalidArgument("unknown preset '" + c.preset + "'");
}

std::string render(const nlohmann::json& j) { return j.dump(2) + "\n"; }

RunOutcome run_solve(const RunConfig& config) {
  validate(config);
  const SolveResult r = solve(config);
  nlohmann::json doc = summary_json(r);
  doc["config"] = to_json(config);
  doc["config"]["command"] = "solve";
  std::ostringstream csv;
  write_field_csv(csv, r.field);
  write_file(config, "field.csv", csv.str());
  write_file(config, "summary.json", render(doc));
  return {doc, 0};
}

RunOutcome run_analyze(const RunConfig& config) {
  validate(config);
  RunConfig c = config;
  if (c.checks.empty()) c.checks = kChecks;
  const Subject s = subject(c);
  const ConcavityOptions opts = concavity_options(c);
  nlohmann::json checks = nlohmann::json::object();
  int status = 0;
  auto flag = [&status](const ConcavityReport& r) {
    if (r.verdict == Verdict::Fails) status = 1;
  };

  for (const auto& name : c.checks) {
    if (name == "alpha-star") {
      checks[name] = to_json(concavity_exponent(s.field, c.bisection_tol, opts));
    } else if (name == "power-concave") {
      const ConcavityReport r = is_power_concave(s.field, c.alpha, opts);
      flag(r);
      checks[name] = to_json(r);
      checks[name]["alpha"] = round12(c.alpha);
    } else if (name == "property-a") {
      const ConcavityReport r = property_A_check(s.field, opts);
      flag(r);
      checks[name] = to_json(r);
    } else if (name == "local-property-a") {
      const Point x0 = c.local_x0.value_or(s.field.domain().centroid());
      const double radius = c.local_radius > 0.0
                                ? c.local_radius
                                : 0.25 * s.field.domain().distance_to_boundary(x0);
      const ConcavityReport r = local_property_A_check(s.field, x0, radius, opts);
      flag(r);
      checks[name] = to_json(r);
      checks[name]["x0"] = pt(x0);
      checks[name]["radius"] = round12(radius);
    } else if (name == "serrin") {
      checks[name] = to_json(boundary_gradient_stats(s.field));
    } else if (name == "level-set-bound") {
      const LevelSetBound b = s.solved ? level_set_bound_check(*s.solved, c.alpha, c.epsilon)
                                       : level_set_bound_check(*s.smooth, c.alpha, c.epsilon, c.h);
      checks[name] = to_json(b);
    }
  }

  nlohmann::json doc{{"config", to_json(c)}, {"field", field_json(s)}, {"checks", checks}, {"status", status}};
  doc["config"]["command"] = "analyze";
  write_file(c, "report.json", render(doc));
  return {doc, status};
}

RunOutcome run_harmonic(const RunConfig& config) {
  validate(config);
  const Subject s = subject(config);
  const HarmonicDecomposition d = decompose(s.field, config.harmonic);

  nlohmann::json hc = nlohmann::json::array();
  for (const ModeCheck& m : harmonicity_check(d, 1e-3)) {
    hc.push_back({{"k", m.k}, {"deviation", round12(m.deviation)}, {"pass", m.pass}});
  }

  // Most negative 2 v v_rr - v_r^2 over directions at r = rho / 4.
  const double r = 0.25 * d.rho;
  double qmin = std::numeric_limits<double>::infinity();
  Vec2 worst = Vec2::UnitX();
  constexpr int kDirections = 64;
  for (int k = 0; k < kDirections; ++k) {
    const double t = 2.0 * kPi * k / kDirections;
    const Vec2 xi(std::cos(t), std::sin(t));
    const double q = radial_sign_quantity(s.field, d.base, xi, r);
    if (q < qmin) {
      qmin = q;
      worst = xi;
    }
  }
  nlohmann::json radial{{"r", round12(r)}, {"min", round12(qmin)}, {"direction", pt(worst)}};

  nlohmann::json lead;
  try {
    lead = to_json(leading_term_fit(s.field, d, worst, 0.0125 * d.rho, 0.125 * d.rho));
  } catch (const FitRejected& e) {
    lead = {{"rejected", e.what()}};
  }

  nlohmann::json doc{{"config", to_json(config)}, {"field", field_json(s)},       {"decomposition", to_json(d)},
                     {"harmonicity", hc},         {"radial_sign", radial},        {"leading_term", lead}};
  doc["config"]["command"] = "harmonic";
  write_file(config, "harmonic.json", render(doc));
  return {doc, 0};
}

}  // namespace torsion
