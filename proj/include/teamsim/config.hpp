#pragma once

#include <nlohmann/json.hpp>

#include "teamsim/harness.hpp"

// JSON experiment configs. The schema is documented in README.md; every
// field has a default, so a config names only what it changes.

namespace teamsim {

ExperimentConfig parse_config(const nlohmann::json& j);

ExperimentConfig load_config_file(const std::filesystem::path& path);

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

/// Sets j at a dot-separated key path ("integrator.h", "model.tau_app"),
/// creating objects along the way.
void set_json_path(nlohmann::json& j, const std::string& dot_path,
                   const nlohmann::json& value);

/// Parses a sweep value: tries number, then bool, falls back to string.
nlohmann::json parse_scalar(const std::string& text);

}  // namespace teamsim
