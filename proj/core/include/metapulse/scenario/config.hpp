#pragma once

// Scenario configuration. The text format is INI: flat [section] headers and
// `key = value` lines, `;` starts a comment. A top-level `scenario = <name>`
// line (or [run] scenario) selects the scenario.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metapulse/evolution.hpp"
#include "metapulse/medium.hpp"

namespace metapulse::scenario {

enum class ScenarioKind {
  split,
  propagate_linear,
  propagate_kg,
  propagate_nonlinear,
  propagate_unidirectional,
  stationary_linear,
  stationary_nonlinear,
  taylor_error,
  reference_compare,
};

std::string to_string(ScenarioKind kind);
std::optional<ScenarioKind> scenario_from_string(std::string_view name);

enum class UnitSystem { normalized, si };

enum class PulseShape { gaussian_modulated, user_file };

/// How the B boundary signal is derived from the E boundary signal.
enum class BoundaryMode {
  right,  ///< k = a j: purely right-moving (Lambda = 0)
  left,   ///< k = -a j: purely left-moving (Pi = 0)
  zero,   ///< k = 0
};

struct PulseSpec {
  PulseShape shape = PulseShape::gaussian_modulated;
  double carrier = 0.0;    ///< rad/s
  double width = 0.0;      ///< Gaussian standard deviation in time, s
  double amplitude = 1.0;  ///< V/m
  std::optional<double> center;  ///< s; defaults to a quarter of the window
  std::string file;        ///< two columns: t, E(0, t)
  BoundaryMode boundary = BoundaryMode::right;
};

struct GridSpec {
  std::size_t n = 4096;
  std::optional<double> dt;  ///< defaults to 32 samples per carrier period
};

/// Scenario-specific numbers. Only the keys listed for the chosen scenario are
/// read; see scenario_catalog().
struct RunSpec {
  double x_end = 0.0;
  std::size_t stations = 4;
  std::optional<std::size_t> steps;  ///< defaults to 50 steps per beta
  std::size_t record_every = 1;
  bool dealias = true;
  MuModel mu_model = MuModel::dominant;
  bool dimensionless = false;
  std::optional<double> band_edge;  ///< defaults to 0.1 min(omega_pe, omega_pm)

  double velocity = 0.0;
  double amplitude_r = 1.0;
  double amplitude_l = 1.0;
  double xi_end = 0.0;
  std::size_t points = 401;
  double pi0 = 0.0;
  double dpi0 = 0.0;

  double max_ratio = 0.95;

  double dx = 0.0;
  double courant = 0.5;
  double x_ref = 0.0;
  std::vector<double> probes;
  double pad_speed = 0.3;
  double budget = 0.02;
  bool convergence = true;
};

struct OutputSpec {
  std::string directory = "metapulse-out";
  bool spectra = true;  ///< formats contains "spectra"
};

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::split;
  UnitSystem units = UnitSystem::normalized;
  DrudeParams medium;
  GridSpec grid;
  PulseSpec pulse;
  RunSpec run;
  OutputSpec output;
  /// Every recognised key with its effective value, in a fixed order, so the
  /// run can be reproduced from the manifest alone.
  std::vector<std::pair<std::string, std::string>> resolved;
  std::vector<std::string> defaulted;  ///< keys filled from defaults

  double dt() const;  ///< resolved grid step
};

struct ConfigIssue {
  std::string key;   ///< "section.key", or "" for syntax errors
  std::string kind;  ///< syntax | unknown-key | type-mismatch | missing-key | out-of-range | band-violation
  std::string message;
};

struct ParseResult {
  std::optional<ScenarioConfig> config;
  std::vector<ConfigIssue> issues;

  bool ok() const { return config.has_value(); }
};

/// Parses and validates. `overrides` are "section.key=value" strings applied
/// on top of the text; unknown keys there are reported like file keys.
ParseResult parse_config(std::string_view text, const std::vector<std::string>& overrides = {});

/// Renders resolved entries back into config text.
std::string render_config(const ScenarioConfig& config);

struct ScenarioInfo {
  ScenarioKind kind;
  std::string summary;
  std::vector<std::string> required;
  std::vector<std::string> optional;
};

const std::vector<ScenarioInfo>& scenario_catalog();

}  // namespace metapulse::scenario
