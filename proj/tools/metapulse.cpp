// metapulse: run, validate and list pulse-propagation scenarios.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "metapulse/scenario/config.hpp"
#include "metapulse/scenario/runner.hpp"

namespace fs = std::filesystem;
using namespace metapulse::scenario;

namespace {

std::optional<std::string> slurp(const fs::path& path) {
  std::ifstream f(path);
  if (!f) return std::nullopt;
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::optional<ScenarioConfig> load(const fs::path& path, const std::vector<std::string>& overrides) {
  const auto text = slurp(path);
  if (!text) {
    std::cerr << path.string() << ": cannot read\n";
    return std::nullopt;
  }
  auto parsed = parse_config(*text, overrides);
  for (const auto& issue : parsed.issues) {
    std::cerr << path.string() << ": " << (issue.key.empty() ? "<file>" : issue.key) << ": " << issue.kind << ": "
              << issue.message << '\n';
  }
  return parsed.config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metapulse: directed-wave pulse propagation in Drude metamaterials"};
  app.require_subcommand(1);
  spdlog::set_pattern("[%l] %v");

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "run one scenario and write its manifest and tables");
  run->add_option("config", config_path, "scenario config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides output.directory)");
  run->add_option("--override", overrides, "section.key=value, applied after the file")->take_all();
  run->add_flag("-q,--quiet", quiet, "only print errors");

  auto* validate = app.add_subcommand("validate", "parse and validate a config, print the resolved values");
  validate->add_option("config", config_path, "scenario config file")->required();
  validate->add_option("--override", overrides, "section.key=value")->take_all();

  auto* list = app.add_subcommand("scenarios", "list scenarios and their keys");

  CLI11_PARSE(app, argc, argv);
  if (quiet) spdlog::set_level(spdlog::level::err);

  if (list->parsed()) {
    for (const auto& info : scenario_catalog()) {
      std::cout << to_string(info.kind) << "\n  " << info.summary << "\n  required:";
      for (const auto& k : info.required) std::cout << ' ' << k;
      std::cout << "\n  optional:";
      for (const auto& k : info.optional) std::cout << ' ' << k;
      std::cout << "\n";
    }
    return kExitOk;
  }

  const auto cfg = load(config_path, overrides);
  if (!cfg) return kExitConfigError;

  if (validate->parsed()) {
    std::cout << render_config(*cfg);
    return kExitOk;
  }

  const fs::path base = fs::absolute(config_path).parent_path();
  const auto result = run_scenario(*cfg, out_dir, base);
  if (!quiet) {
    for (const auto& c : result.checks) {
      std::cout << (c.gated ? (c.passed ? "PASS " : "FAIL ") : "info ") << c.name << " = " << c.value;
      if (c.limit) std::cout << " (limit " << *c.limit << ")";
      std::cout << '\n';
    }
    std::cout << "wrote " << result.files.size() << " files to " << result.directory.string() << '\n';
  }
  if (!result.error.empty()) std::cerr << "error: " << result.error << '\n';
  return result.exit_status;
}
