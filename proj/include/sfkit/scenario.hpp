#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "sfkit/errors.hpp"

namespace sfkit {

inline constexpr const char* kScenarioVersion = "sfkit-scenario/1";

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the scenario's seed
  std::optional<double> tol;          // overrides quadrature / stability tolerances
};

struct ScenarioOutput {
  nlohmann::json result;
  /// file name -> CSV contents
  std::map<std::string, std::string> tables;
};

/// Directory holding the bundled scenarios.
std::string scenario_directory();

/// Reads a scenario from a path, or by name from the bundled directory
/// ("step_translation" and "step_translation.json" both resolve).
nlohmann::json load_scenario(const std::string& file_or_name);

/// Validates and runs a scenario. Throws sfkit::Error subclasses.
ScenarioOutput run_scenario(const nlohmann::json& scenario, const RunOptions& opts = {});

/// 1 for validation failures, 2 for non-convergence, 3 for precision dead zones.
int exit_code(ErrorKind kind);

nlohmann::json error_json(const Error& e);

}  // namespace sfkit
