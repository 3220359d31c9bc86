#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sweep/analysis.hpp"
#include "sweep/solver.hpp"

namespace sweep {

/// A scenario parsed from a JSON file, together with the normalized form of
/// the file (every default filled in) used for round-trips and reduction.
struct ParsedScenario {
  int order = 1;
  std::variant<FirstOrderScenario, SecondOrderScenario> scenario;
  Quadrature quadrature = Quadrature::left;
  nlohmann::json normalized;

  const FirstOrderScenario& first() const {
    return std::get<FirstOrderScenario>(scenario);
  }
  const SecondOrderScenario& second() const {
    return std::get<SecondOrderScenario>(scenario);
  }
};

/// Parses and fully validates a scenario file; every failure names the
/// offending field. Throws ValidationError (or a subclass).
ParsedScenario parse_scenario(const std::filesystem::path& path);
ParsedScenario parse_scenario_json(const nlohmann::json& j);

/// The reduced first-order scenario file for an order-2 input: the set
/// becomes product(K, free_dims = d) and the perturbation is wrapped in kind
/// "lifted"; the initial state is (u0, x0).
nlohmann::json reduced_scenario_json(const ParsedScenario& parsed);

/// CSV with header t,x_1..x_d,u_1..u_d (positions present for second-order
/// trajectories only), 17 significant digits, LF line endings.
void write_trajectory_csv(const Trajectory& traj,
                          const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

void write_convergence_csv(const ConvergenceTable& table,
                           const std::filesystem::path& path);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

}  // namespace sweep
