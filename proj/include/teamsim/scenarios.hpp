#pragma once

#include <optional>
#include <string>
#include <vector>

#include "teamsim/harness.hpp"

// Built-in scenario library. Each scenario pins its own seed and
// generators and declares which hypothesis, if any, it deliberately
// violates; `check` confirms the declaration against the materialized
// team.

namespace teamsim {

struct Scenario {
  std::string name;
  std::string description;
  uint64_t seed = 0;
  std::vector<ExperimentConfig> runs;  // one or more matched runs
};

std::vector<std::string> scenario_names();

/// Builds a scenario by name; seed_override replaces the pinned seed.
/// Output directories are laid out under out_base/<name>-seed<seed>[/run].
/// Throws std::invalid_argument for unknown names.
Scenario make_scenario(const std::string& name,
                       std::optional<uint64_t> seed_override,
                       const std::filesystem::path& out_base);

}  // namespace teamsim
