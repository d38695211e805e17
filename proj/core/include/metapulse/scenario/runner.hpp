#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "metapulse/scenario/config.hpp"

namespace metapulse::scenario {

/// Exit statuses of run_scenario and the command-line tool.
enum ExitStatus : int {
  kExitOk = 0,
  kExitModuleError = 1,  ///< a module threw; diagnostic.txt is written
  kExitConfigError = 2,
  kExitCheckFailed = 3,  ///< the run finished but a gated check failed
};

struct CheckSummary {
  std::string name;
  double value = 0.0;
  std::optional<double> limit;  ///< value must not exceed it (or lie within [lower, limit])
  std::optional<double> lower;
  bool gated = false;           ///< false: reported only
  bool passed = true;
  std::string note;
};

struct RunResult {
  int exit_status = kExitOk;
  std::filesystem::path directory;
  std::vector<std::filesystem::path> files;  ///< tables and manifest, in write order
  std::vector<CheckSummary> checks;
  std::string error;  ///< module error message when exit_status == kExitModuleError
};

/// Runs one scenario and writes manifest.json plus CSV tables into
/// `out_dir` (or config.output.directory when empty). Relative pulse files
/// resolve against `base`. Module errors are caught, written to
/// diagnostic.txt and reported through exit_status.
RunResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir = {},
                       const std::filesystem::path& base = {});

}  // namespace metapulse::scenario
