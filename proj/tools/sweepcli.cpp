// sweepcli: scenario-driven driver for the catching-up solver.
//
// Subcommands:
//   run    --scenario F --output O [--steps n] [--quadrature q]
//   study  --scenario F --levels L --output O [--refine R]
//   audit  --scenario F [--samples N] [--probes P] [--radius R] [--eta E]
//   reduce --scenario F --output O
//
// Exit codes: 0 success, 1 audit violations, 2 solver error, 3 validation
// error. SWEEP_SEED overrides the audit sampling seed.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sweep/analysis.hpp"
#include "sweep/scenario_io.hpp"

using nlohmann::json;

namespace {

std::uint64_t audit_seed() {
  if (const char* env = std::getenv("SWEEP_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
    throw sweep::ValidationError("SWEEP_SEED: expected an unsigned integer");
  }
  return sweep::kDefaultSeed;
}

json residual_to_json(const sweep::ResidualReport& rep) {
  json flagged = json::array();
  for (int node : rep.flagged) flagged.push_back(node);
  return json{{"tol", rep.tol},
              {"max_violation", rep.max_violation},
              {"worst_node", rep.worst_node},
              {"flagged", flagged}};
}

double max_feasibility_distance(const sweep::Trajectory& traj,
                                const sweep::MovingSet& set) {
  double worst = 0.0;
  for (int i = 0; i <= traj.grid.steps(); ++i)
    worst = std::max(worst, set.distance(traj.grid.node(i),
                                         traj.states[static_cast<std::size_t>(i)]));
  return worst;
}

int cmd_run(const std::string& scenario_path, const std::string& output,
            int steps_override, const std::string& quadrature_override) {
  sweep::ParsedScenario parsed = sweep::parse_scenario(scenario_path);

  sweep::Quadrature quadrature = parsed.quadrature;
  if (!quadrature_override.empty()) {
    if (quadrature_override == "left")
      quadrature = sweep::Quadrature::left;
    else if (quadrature_override == "midpoint")
      quadrature = sweep::Quadrature::midpoint;
    else
      throw sweep::ValidationError("--quadrature: expected 'left' or 'midpoint'");
  }

  const std::uint64_t seed = audit_seed();
  json report;
  report["scenario"] = scenario_path;
  report["order"] = parsed.order;
  report["quadrature"] =
      quadrature == sweep::Quadrature::left ? "left" : "midpoint";

  const sweep::Trajectory traj = [&]() {
    if (parsed.order == 2) {
      sweep::SecondOrderScenario sc = parsed.second();
      if (steps_override > 0) sc = sc.with_steps(steps_override);
      auto t = sweep::catching_up_second_order(sc, quadrature);
      const auto residual =
          sweep::residual_normal_cone(t, sc, 1e-8, 256, seed, quadrature);
      report["residual"] = residual_to_json(residual);
      report["max_feasibility_distance"] = max_feasibility_distance(t, sc.set());
      report["steps"] = sc.grid().steps();
      return t;
    }
    sweep::FirstOrderScenario sc = parsed.first();
    if (steps_override > 0) sc = sc.with_steps(steps_override);
    auto t = sweep::catching_up_first_order(sc, quadrature);
    const auto residual =
        sweep::residual_normal_cone_first(t, sc, 1e-8, 256, seed, quadrature);
    report["residual"] = residual_to_json(residual);
    report["max_feasibility_distance"] = max_feasibility_distance(t, sc.set());
    report["steps"] = sc.grid().steps();
    return t;
  }();

  sweep::write_trajectory_csv(traj, output);
  report["output"] = output;
  std::cout << report.dump(2) << "\n";
  return 0;
}

int cmd_study(const std::string& scenario_path, const std::string& output,
              int levels, int refine) {
  sweep::ParsedScenario parsed = sweep::parse_scenario(scenario_path);
  sweep::ConvergenceTable table =
      parsed.order == 2
          ? sweep::convergence_study(parsed.second(), levels, refine,
                                     parsed.quadrature)
          : sweep::convergence_study(parsed.first(), levels, refine,
                                     parsed.quadrature);
  sweep::write_convergence_csv(table, output);

  json rows = json::array();
  for (const auto& row : table.rows) {
    json r{{"steps", row.steps}, {"h", row.h}, {"error", row.error}};
    if (row.exact)
      r["order"] = "exact";
    else if (row.has_order)
      r["order"] = row.order;
    rows.push_back(r);
  }
  json report{{"scenario", scenario_path},
              {"reference_steps", table.reference_steps},
              {"rows", rows},
              {"output", output}};
  std::cout << report.dump(2) << "\n";
  return 0;
}

int cmd_audit(const std::string& scenario_path, long samples, int probes,
              double radius, double eta) {
  sweep::ParsedScenario parsed = sweep::parse_scenario(scenario_path);
  const std::uint64_t seed = audit_seed();

  const sweep::MovingSet& set = parsed.order == 2
                                    ? parsed.second().set()
                                    : parsed.first().set();
  const sweep::TimeGrid& grid =
      parsed.order == 2 ? parsed.second().grid() : parsed.first().grid();

  // Eq. (1) audit over the scenario grid
  const auto probe_cloud = sweep::variation_probes(set, probes, seed);
  const double worst_ratio = sweep::variation_audit(set, grid, probe_cloud);
  const bool variation_ok = worst_ratio <= 1.0 + sweep::kVariationTol;

  // prox-regularity audit at a few times across the horizon
  json prox = json::array();
  long prox_violations = 0;
  double prox_worst = std::numeric_limits<double>::lowest();
  for (double t : {0.0, 0.5 * grid.horizon(), grid.horizon()}) {
    const auto rep = sweep::prox_inequality_audit(set, t, samples, seed);
    prox_violations += rep.violation_count;
    prox_worst = std::max(prox_worst, rep.worst_slack);
    prox.push_back(json{{"t", t},
                        {"samples_checked", rep.samples_checked},
                        {"worst_slack", rep.worst_slack},
                        {"violations", rep.violation_count}});
  }

  // hypothesis audits on the perturbation
  json growth;
  double lipschitz = 0.0;
  long growth_violations = 0;
  if (parsed.order == 2) {
    const auto& f = parsed.second().perturbation();
    const auto violations = sweep::audit_growth(f, grid, samples, radius, seed);
    growth_violations = static_cast<long>(violations.size());
    lipschitz = sweep::audit_lipschitz(f, grid, eta, samples, seed);
  } else {
    const auto& g = parsed.first().map();
    const auto violations =
        sweep::audit_growth_state(g, grid, samples, radius, seed);
    growth_violations = static_cast<long>(violations.size());
    lipschitz = sweep::audit_lipschitz_state(g, grid, eta, samples, seed);
  }
  growth = json{{"violations", growth_violations}, {"radius", radius}};

  const bool ok = variation_ok && prox_violations == 0 && growth_violations == 0;
  json report{{"scenario", scenario_path},
              {"seed", seed},
              {"variation",
               json{{"worst_ratio", worst_ratio}, {"ok", variation_ok}}},
              {"prox", prox},
              {"prox_worst_slack", prox_worst},
              {"growth", growth},
              {"lipschitz", json{{"eta", eta}, {"estimate", lipschitz}}},
              {"ok", ok}};
  std::cout << report.dump(2) << "\n";
  return ok ? 0 : 1;
}

int cmd_reduce(const std::string& scenario_path, const std::string& output) {
  sweep::ParsedScenario parsed = sweep::parse_scenario(scenario_path);
  const json reduced = sweep::reduced_scenario_json(parsed);
  std::ofstream os(output, std::ios::binary);
  if (!os)
    throw sweep::ValidationError("cannot open output file '" + output + "'");
  os << reduced.dump(2) << "\n";
  std::cout << json{{"scenario", scenario_path}, {"output", output}}.dump(2)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"catching-up solver for perturbed sweeping processes"};
  app.require_subcommand(1);

  std::string scenario, output, quadrature;
  int steps = 0, levels = 4, refine = 8, probes = 100;
  long samples = 20000;
  double radius = 4.0, eta = 1.0;

  CLI::App* run = app.add_subcommand("run", "solve a scenario, emit CSV + report");
  run->add_option("--scenario", scenario, "scenario JSON file")->required();
  run->add_option("--output", output, "trajectory CSV path")->required();
  run->add_option("--steps", steps, "override the scenario's step count");
  run->add_option("--quadrature", quadrature, "left|midpoint");

  CLI::App* study = app.add_subcommand("study", "convergence study, emit CSV");
  study->add_option("--scenario", scenario, "scenario JSON file")->required();
  study->add_option("--output", output, "table CSV path")->required();
  study->add_option("--levels", levels, "refinement levels (>= 3)");
  study->add_option("--refine", refine, "extra reference refinement factor");

  CLI::App* audit = app.add_subcommand(
      "audit", "variation, prox, growth and Lipschitz audits");
  audit->add_option("--scenario", scenario, "scenario JSON file")->required();
  audit->add_option("--samples", samples, "samples per audit");
  audit->add_option("--probes", probes, "variation probe count");
  audit->add_option("--radius", radius, "growth sampling radius");
  audit->add_option("--eta", eta, "Lipschitz ball radius");

  CLI::App* reduce = app.add_subcommand(
      "reduce", "emit the reduced first-order scenario of an order-2 file");
  reduce->add_option("--scenario", scenario, "scenario JSON file")->required();
  reduce->add_option("--output", output, "reduced scenario JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) return cmd_run(scenario, output, steps, quadrature);
    if (study->parsed()) return cmd_study(scenario, output, levels, refine);
    if (audit->parsed()) return cmd_audit(scenario, samples, probes, radius, eta);
    if (reduce->parsed()) return cmd_reduce(scenario, output);
  } catch (const sweep::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const sweep::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
