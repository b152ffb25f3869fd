#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace exospin::app {

struct RunOutcome {
  std::vector<std::filesystem::path> files;
  nlohmann::json summary;
  /// Human-readable result printed by the CLI.
  std::string report;
};

/// Runs the configured scenario, writing its data files into `out_dir`.
RunOutcome run_scenario(const RunConfig& cfg, const std::filesystem::path& out_dir);

struct DispatchResult {
  RunOutcome outcome;
  std::filesystem::path output_dir;
  std::filesystem::path manifest;
};

/// validate + run_scenario + summary.json + manifest.json.
DispatchResult dispatch(const RunConfig& cfg);

}  // namespace exospin::app
