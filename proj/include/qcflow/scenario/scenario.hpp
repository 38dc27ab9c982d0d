#pragma once

// Scenario orchestration: a JSON config names a field, an operation, and its
// parameters; the runner wires the modules, writes artifacts into the output
// directory, and emits a manifest recording version, config hash, PRNG seed,
// thread count and tolerances. Identical config + seed produce byte-identical
// outputs.

#include <cstdint>
#include <string>

#include "json.hpp"

namespace qcflow {

struct RunSettings {
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int threads = 0;  // resolved against QCFLOW_THREADS / hardware
};

struct RunOutcome {
  int scenarios_run = 0;
  bool all_bounds_passed = true;
};

// Throws ConfigError for invalid configs, NumericError family for runtime
// failures. Returns the outcome; a failed bound check is not an exception.
RunOutcome run_scenario_file(const std::string& config_path, const RunSettings& settings);

// Single already-parsed scenario object (used by the CLI subcommands).
RunOutcome run_scenario_json(const nlohmann::json& scenario, const RunSettings& settings,
                             const std::string& config_hash = "inline");

}  // namespace qcflow
