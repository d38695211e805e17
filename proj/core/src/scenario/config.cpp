#include "metapulse/scenario/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "metapulse/errors.hpp"
#include "metapulse/scenario/tables.hpp"
#include "metapulse/spectral.hpp"

namespace metapulse::scenario {

namespace pt = boost::property_tree;

namespace {

struct KindName {
  ScenarioKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {ScenarioKind::split, "split"},
    {ScenarioKind::propagate_linear, "propagate-linear"},
    {ScenarioKind::propagate_kg, "propagate-kg"},
    {ScenarioKind::propagate_nonlinear, "propagate-nonlinear"},
    {ScenarioKind::propagate_unidirectional, "propagate-unidirectional"},
    {ScenarioKind::stationary_linear, "stationary-linear"},
    {ScenarioKind::stationary_nonlinear, "stationary-nonlinear"},
    {ScenarioKind::taylor_error, "taylor-error"},
    {ScenarioKind::reference_compare, "reference-compare"},
};

const std::vector<std::string> kMediumKeys = {"medium.units", "medium.omega_pe", "medium.omega_pm", "medium.c",
                                              "medium.eps0",  "medium.mu0",      "medium.chi3"};
const std::vector<std::string> kPulseKeys = {"grid.n",          "grid.dt",      "pulse.shape",
                                             "pulse.carrier",   "pulse.width",  "pulse.amplitude",
                                             "pulse.center",    "pulse.file",   "pulse.boundary"};
const std::vector<std::string> kOutputKeys = {"output.directory", "output.formats"};

bool uses_pulse(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::stationary_linear:
    case ScenarioKind::stationary_nonlinear:
    case ScenarioKind::taylor_error:
      return false;
    default:
      return true;
  }
}

std::string trim(std::string s) {
  const auto notspace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
  return s;
}

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

// Reads typed keys out of the tree. Remembers which keys were recognised and
// which fell back to a default.
class Reader {
 public:
  Reader(const pt::ptree& tree, std::vector<ConfigIssue>& issues) : tree_(tree), issues_(issues) {}

  std::optional<std::string> raw(const std::string& key) {
    known_.insert(key);
    const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!v) return std::nullopt;
    return trim(*v);
  }

  std::optional<double> number(const std::string& key) {
    auto s = raw(key);
    if (!s) return std::nullopt;
    double out = 0.0;
    std::string_view v = *s;
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size() || v.empty() || !std::isfinite(out)) {
      issue(key, "type-mismatch", "expected a finite number, got '" + *s + "'");
      return std::nullopt;
    }
    return out;
  }

  double number_or(const std::string& key, double fallback) {
    if (auto v = number(key)) return *v;
    if (!present(key)) defaulted_.push_back(key);
    return fallback;
  }

  std::optional<std::size_t> count(const std::string& key) {
    auto s = raw(key);
    if (!s) return std::nullopt;
    std::size_t out = 0;
    const auto res = std::from_chars(s->data(), s->data() + s->size(), out);
    if (res.ec != std::errc() || res.ptr != s->data() + s->size() || s->empty()) {
      issue(key, "type-mismatch", "expected a non-negative integer, got '" + *s + "'");
      return std::nullopt;
    }
    return out;
  }

  std::size_t count_or(const std::string& key, std::size_t fallback) {
    if (auto v = count(key)) return *v;
    if (!present(key)) defaulted_.push_back(key);
    return fallback;
  }

  bool flag_or(const std::string& key, bool fallback) {
    auto s = raw(key);
    if (!s) {
      defaulted_.push_back(key);
      return fallback;
    }
    if (*s == "true" || *s == "yes" || *s == "on" || *s == "1") return true;
    if (*s == "false" || *s == "no" || *s == "off" || *s == "0") return false;
    issue(key, "type-mismatch", "expected true or false, got '" + *s + "'");
    return fallback;
  }

  template <class E>
  E choice_or(const std::string& key, std::initializer_list<std::pair<const char*, E>> options, E fallback) {
    auto s = raw(key);
    if (!s) {
      defaulted_.push_back(key);
      return fallback;
    }
    std::vector<std::string> names;
    for (const auto& [name, value] : options) {
      if (*s == name) return value;
      names.emplace_back(name);
    }
    issue(key, "type-mismatch", "expected one of {" + join(names, ", ") + "}, got '" + *s + "'");
    return fallback;
  }

  std::vector<double> numbers(const std::string& key) {
    std::vector<double> out;
    auto s = raw(key);
    if (!s) return out;
    std::string item;
    std::istringstream ss(*s);
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      double v = 0.0;
      const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
      if (res.ec != std::errc() || res.ptr != item.data() + item.size() || item.empty() || !std::isfinite(v)) {
        issue(key, "type-mismatch", "expected a comma-separated list of numbers, got '" + *s + "'");
        return {};
      }
      out.push_back(v);
    }
    return out;
  }

  bool present(const std::string& key) const {
    return tree_.get_optional<std::string>(pt::ptree::path_type(key, '.')).has_value();
  }

  void issue(const std::string& key, const std::string& kind, const std::string& message) {
    issues_.push_back({key, kind, message});
  }

  void unknown_keys() {
    for (const auto& [name, child] : tree_) {
      if (child.empty()) {
        if (name == "medium" || name == "grid" || name == "pulse" || name == "run" || name == "output") continue;
        if (!known_.count(name)) issue(name, "unknown-key", "unknown key '" + name + "'");
        continue;
      }
      for (const auto& [key, leaf] : child) {
        const std::string full = name + "." + key;
        if (!known_.count(full)) issue(full, "unknown-key", "unknown key '" + full + "'");
      }
    }
  }

  std::vector<std::string>& defaulted() { return defaulted_; }

 private:
  const pt::ptree& tree_;
  std::vector<ConfigIssue>& issues_;
  std::set<std::string> known_;
  std::vector<std::string> defaulted_;
};

void require(Reader& r, const std::string& key) {
  if (!r.present(key)) r.issue(key, "missing-key", "required key '" + key + "' is missing");
}

void positive(Reader& r, const std::string& key, double value) {
  if (!(value > 0.0)) r.issue(key, "out-of-range", key + " must be positive, got " + format_number(value));
}

const ScenarioInfo& info_for(ScenarioKind kind) {
  for (const auto& info : scenario_catalog()) {
    if (info.kind == kind) return info;
  }
  throw std::logic_error("scenario missing from catalog");
}

// A Gaussian of standard deviation `width` has spectral standard deviation
// 1 / width; six of those bound the occupied band to below 1e-7 of peak.
constexpr double kSpectralSigmas = 6.0;

void check_bands(Reader& r, const ScenarioConfig& cfg) {
  const auto& p = cfg.medium;
  const auto& pulse = cfg.pulse;
  const ScenarioKind kind = cfg.scenario;
  if (!uses_pulse(kind)) return;
  const bool gaussian = pulse.shape == PulseShape::gaussian_modulated;
  const double w0 = pulse.carrier;
  if (gaussian || w0 > 0.0) {
    if (classify_band(p, w0) == Band::evanescent) {
      r.issue("pulse.carrier", "band-violation",
              "carrier " + format_number(w0) + " lies in the evanescent band (" + format_number(p.lower_edge()) +
                  ", " + format_number(p.upper_edge()) + ")");
      return;
    }
  }
  const bool lower_only = kind == ScenarioKind::propagate_kg || kind == ScenarioKind::propagate_nonlinear ||
                          kind == ScenarioKind::propagate_unidirectional ||
                          kind == ScenarioKind::reference_compare;
  if (lower_only && !(w0 < p.lower_edge())) {
    r.issue("pulse.carrier", "band-violation",
            "scenario " + to_string(kind) + " needs the carrier below min(omega_pe, omega_pm) = " +
                format_number(p.lower_edge()));
    return;
  }
  if (kind == ScenarioKind::propagate_kg) {
    const double edge = cfg.run.band_edge.value_or(0.1 * p.lower_edge());
    if (!(w0 < edge)) {
      r.issue("pulse.carrier", "band-violation",
              "carrier must lie below the long-wave band edge " + format_number(edge));
    }
  }
  if (gaussian && pulse.width > 0.0) {
    const double lo = w0 - kSpectralSigmas / pulse.width;
    const double hi = w0 + kSpectralSigmas / pulse.width;
    if (hi > p.lower_edge() && lo < p.upper_edge() && p.lower_edge() < p.upper_edge()) {
      r.issue("pulse.width", "band-violation",
              "pulse band [" + format_number(lo) + ", " + format_number(hi) + "] overlaps the evanescent band");
    } else if (lower_only && hi > p.lower_edge()) {
      r.issue("pulse.width", "band-violation",
              "pulse band reaches " + format_number(hi) + ", above min(omega_pe, omega_pm)");
    }
  }
  if (cfg.grid.n >= 8 && (cfg.grid.n & (cfg.grid.n - 1)) == 0 && cfg.dt() > 0.0) {
    std::string reason;
    const TimeGrid grid(cfg.grid.n, cfg.dt());
    if (!admissible_for_slowness(p, grid, true, kDefaultTolA, &reason)) {
      r.issue("grid.dt", "band-violation", "grid is not admissible for the slowness operator: " + reason);
    }
  }
}

}  // namespace

std::string to_string(ScenarioKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "?";
}

std::optional<ScenarioKind> scenario_from_string(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (name == kn.name) return kn.kind;
  }
  return std::nullopt;
}

double ScenarioConfig::dt() const {
  if (grid.dt) return *grid.dt;
  if (pulse.carrier > 0.0) return 2.0 * std::numbers::pi / (32.0 * pulse.carrier);
  return 0.0;
}

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog = {
      {ScenarioKind::split, "split a boundary regime (E, B) into directed waves and reconstruct it",
       {"medium.omega_pe", "medium.omega_pm", "pulse.carrier", "pulse.width"},
       {}},
      {ScenarioKind::propagate_linear, "exact linear propagation of the directed waves",
       {"medium.omega_pe", "medium.omega_pm", "pulse.carrier", "pulse.width", "run.x_end"},
       {"run.stations"}},
      {ScenarioKind::propagate_kg, "long-wave (Klein-Gordon) propagation compared with the exact propagator",
       {"medium.omega_pe", "medium.omega_pm", "pulse.carrier", "pulse.width", "run.x_end"},
       {"run.stations", "run.band_edge"}},
      {ScenarioKind::propagate_nonlinear, "coupled Kerr system for both directed waves",
       {"medium.omega_pe", "medium.omega_pm", "medium.chi3", "pulse.carrier", "pulse.width", "run.x_end"},
       {"run.steps", "run.stations", "run.record_every", "run.dealias", "run.mu_model", "run.dimensionless"}},
      {ScenarioKind::propagate_unidirectional, "Kerr system for the right-moving wave alone",
       {"medium.omega_pe", "medium.omega_pm", "medium.chi3", "pulse.carrier", "pulse.width", "run.x_end"},
       {"run.steps", "run.stations", "run.record_every", "run.dealias", "run.mu_model", "run.dimensionless"}},
      {ScenarioKind::stationary_linear, "exponential and sinusoidal traveling profiles",
       {"medium.omega_pe", "medium.omega_pm", "run.velocity", "run.xi_end"},
       {"run.points", "run.amplitude_r", "run.amplitude_l"}},
      {ScenarioKind::stationary_nonlinear, "nonlinear traveling profile via the cubic-root oscillator",
       {"medium.omega_pe", "medium.omega_pm", "medium.chi3", "run.velocity", "run.xi_end", "run.pi0"},
       {"run.dpi0", "run.points"}},
      {ScenarioKind::taylor_error, "relative error of the leading long-wave slowness term",
       {"medium.omega_pe", "medium.omega_pm"},
       {"run.max_ratio", "run.points"}},
      {ScenarioKind::reference_compare, "FDTD probe against split, propagate and reconstruct",
       {"medium.omega_pe", "medium.omega_pm", "pulse.carrier", "pulse.width", "run.x_ref", "run.probes"},
       {"run.dx", "run.courant", "run.pad_speed", "run.budget", "run.convergence"}},
  };
  return catalog;
}

ParseResult parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  ParseResult result;
  auto& issues = result.issues;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    issues.push_back({"", "syntax", "line " + std::to_string(e.line()) + ": " + e.message()});
    return result;
  }
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    const std::string key = eq == std::string::npos ? "" : trim(ov.substr(0, eq));
    if (key.empty() || std::count(key.begin(), key.end(), '.') > 1) {
      issues.push_back({"", "syntax", "override '" + ov + "' is not of the form section.key=value"});
      continue;
    }
    tree.put(pt::ptree::path_type(key, '.'), trim(ov.substr(eq + 1)));
  }
  if (!issues.empty()) return result;

  Reader r(tree, issues);
  ScenarioConfig cfg;

  std::optional<std::string> name = r.raw("scenario");
  if (auto alt = r.raw("run.scenario")) {
    if (name && *name != *alt) r.issue("run.scenario", "out-of-range", "conflicts with top-level scenario");
    name = alt;
  }
  if (!name) {
    r.issue("scenario", "missing-key", "no scenario given");
  } else if (auto kind = scenario_from_string(*name)) {
    cfg.scenario = *kind;
  } else {
    std::vector<std::string> names;
    for (const auto& kn : kKindNames) names.emplace_back(kn.name);
    r.issue("scenario", "type-mismatch", "unknown scenario '" + *name + "'; expected one of {" + join(names, ", ") + "}");
  }

  // medium
  cfg.units = r.choice_or("medium.units", {{"normalized", UnitSystem::normalized}, {"si", UnitSystem::si}},
                          UnitSystem::normalized);
  const double pe = r.number_or("medium.omega_pe", 0.0);
  const double pm = r.number_or("medium.omega_pm", 0.0);
  const double chi3 = r.number_or("medium.chi3", 0.0);
  // Assembled by hand: the factories validate, and bad values must become issues.
  cfg.medium = cfg.units == UnitSystem::si ? DrudeParams::si(1.0, 1.0) : DrudeParams::normalized(1.0, 1.0);
  cfg.medium.omega_pe = pe;
  cfg.medium.omega_pm = pm;
  cfg.medium.chi3 = chi3;
  cfg.medium.c = r.number_or("medium.c", cfg.medium.c);
  cfg.medium.mu0 = r.number_or("medium.mu0", cfg.medium.mu0);
  cfg.medium.eps0 = r.number_or("medium.eps0", 1.0 / (cfg.medium.mu0 * cfg.medium.c * cfg.medium.c));
  for (const char* k : {"medium.omega_pe", "medium.omega_pm", "medium.c", "medium.eps0", "medium.mu0"}) {
    const std::string key = k;
    const double v = key == "medium.omega_pe"   ? cfg.medium.omega_pe
                     : key == "medium.omega_pm" ? cfg.medium.omega_pm
                     : key == "medium.c"        ? cfg.medium.c
                     : key == "medium.eps0"     ? cfg.medium.eps0
                                                : cfg.medium.mu0;
    if (r.present(key)) positive(r, key, v);
  }
  if (cfg.medium.chi3 < 0.0) {
    r.issue("medium.chi3", "out-of-range", "negative chi3 is rejected (defocusing media are not supported)");
  }
  bool medium_ok = true;
  try {
    cfg.medium.validate();
  } catch (const std::exception& e) {
    medium_ok = false;
    const double mismatch = cfg.medium.c * cfg.medium.c * cfg.medium.eps0 * cfg.medium.mu0 - 1.0;
    if (std::abs(mismatch) > 1e-12 && std::isfinite(mismatch)) {
      r.issue("medium.eps0", "out-of-range", e.what());
    }
  }

  // grid and pulse
  cfg.grid.n = r.count_or("grid.n", 4096);
  if (auto dt = r.number("grid.dt")) cfg.grid.dt = *dt;
  cfg.pulse.shape = r.choice_or("pulse.shape",
                                {{"gaussian-modulated", PulseShape::gaussian_modulated},
                                 {"user-file", PulseShape::user_file}},
                                PulseShape::gaussian_modulated);
  cfg.pulse.carrier = r.number_or("pulse.carrier", 0.0);
  cfg.pulse.width = r.number_or("pulse.width", 0.0);
  cfg.pulse.amplitude = r.number_or("pulse.amplitude", 1.0);
  if (auto c = r.number("pulse.center")) cfg.pulse.center = *c;
  cfg.pulse.file = r.raw("pulse.file").value_or("");
  cfg.pulse.boundary = r.choice_or(
      "pulse.boundary",
      {{"right", BoundaryMode::right}, {"left", BoundaryMode::left}, {"zero", BoundaryMode::zero}},
      BoundaryMode::right);

  // run
  auto& run = cfg.run;
  run.x_end = r.number_or("run.x_end", 0.0);
  run.stations = r.count_or("run.stations", 4);
  if (auto s = r.count("run.steps")) run.steps = *s;
  run.record_every = r.count_or("run.record_every", 1);
  run.dealias = r.flag_or("run.dealias", true);
  run.mu_model = r.choice_or("run.mu_model", {{"dominant", MuModel::dominant}, {"full", MuModel::full}},
                             MuModel::dominant);
  run.dimensionless = r.flag_or("run.dimensionless", false);
  if (auto b = r.number("run.band_edge")) run.band_edge = *b;
  run.velocity = r.number_or("run.velocity", 0.0);
  run.amplitude_r = r.number_or("run.amplitude_r", 1.0);
  run.amplitude_l = r.number_or("run.amplitude_l", 1.0);
  run.xi_end = r.number_or("run.xi_end", 0.0);
  run.points = r.count_or("run.points", 401);
  run.pi0 = r.number_or("run.pi0", 0.0);
  run.dpi0 = r.number_or("run.dpi0", 0.0);
  run.max_ratio = r.number_or("run.max_ratio", 0.95);
  run.dx = r.number_or("run.dx", 0.0);
  run.courant = r.number_or("run.courant", 0.5);
  run.x_ref = r.number_or("run.x_ref", 0.0);
  run.probes = r.numbers("run.probes");
  run.pad_speed = r.number_or("run.pad_speed", 0.3);
  run.budget = r.number_or("run.budget", 0.02);
  run.convergence = r.flag_or("run.convergence", true);

  // output
  cfg.output.directory = r.raw("output.directory").value_or("metapulse-out");
  if (auto f = r.raw("output.formats")) {
    cfg.output.spectra = false;
    std::istringstream ss(*f);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item == "spectra") {
        cfg.output.spectra = true;
      } else if (item != "csv" && item != "series") {
        r.issue("output.formats", "type-mismatch", "unknown format '" + item + "'; expected csv, series, spectra");
      }
    }
  }

  r.unknown_keys();

  // Scenario-specific requirements and ranges.
  const auto& info = info_for(cfg.scenario);
  for (const auto& key : info.required) {
    if (key == "pulse.width" && cfg.pulse.shape == PulseShape::user_file) continue;
    if (key == "pulse.carrier" && cfg.pulse.shape == PulseShape::user_file && cfg.grid.dt) continue;
    if (key == "medium.chi3") continue;  // zero is a meaningful default
    require(r, key);
  }
  const ScenarioKind kind = cfg.scenario;
  if (uses_pulse(kind)) {
    if (cfg.grid.n < 8 || (cfg.grid.n & (cfg.grid.n - 1)) != 0) {
      r.issue("grid.n", "out-of-range", "grid.n must be a power of two >= 8");
    }
    if (cfg.grid.dt) positive(r, "grid.dt", *cfg.grid.dt);
    if (cfg.pulse.shape == PulseShape::gaussian_modulated) {
      if (r.present("pulse.carrier")) positive(r, "pulse.carrier", cfg.pulse.carrier);
      if (r.present("pulse.width")) positive(r, "pulse.width", cfg.pulse.width);
    } else if (cfg.pulse.file.empty()) {
      r.issue("pulse.file", "missing-key", "pulse.shape = user-file needs pulse.file");
    } else if (!cfg.grid.dt && !(cfg.pulse.carrier > 0.0)) {
      r.issue("grid.dt", "missing-key", "user-file pulses need grid.dt or pulse.carrier");
    }
  }
  switch (kind) {
    case ScenarioKind::propagate_linear:
    case ScenarioKind::propagate_kg:
    case ScenarioKind::propagate_nonlinear:
    case ScenarioKind::propagate_unidirectional:
      if (r.present("run.x_end")) positive(r, "run.x_end", run.x_end);
      if (run.stations < 1) r.issue("run.stations", "out-of-range", "run.stations must be >= 1");
      if (run.steps && *run.steps < 4) r.issue("run.steps", "out-of-range", "run.steps must be >= 4");
      if (run.record_every < 1) r.issue("run.record_every", "out-of-range", "run.record_every must be >= 1");
      if (run.band_edge) positive(r, "run.band_edge", *run.band_edge);
      if (run.dimensionless && !(cfg.medium.chi3 > 0.0)) {
        r.issue("run.dimensionless", "out-of-range", "dimensionless variables need chi3 > 0");
      }
      break;
    case ScenarioKind::stationary_linear:
    case ScenarioKind::stationary_nonlinear:
      if (r.present("run.velocity")) positive(r, "run.velocity", run.velocity);
      if (r.present("run.xi_end")) positive(r, "run.xi_end", run.xi_end);
      if (run.points < 3) r.issue("run.points", "out-of-range", "run.points must be >= 3");
      break;
    case ScenarioKind::taylor_error:
      if (!(run.max_ratio > 0.0 && run.max_ratio <= 1.0)) {
        r.issue("run.max_ratio", "out-of-range", "run.max_ratio must lie in (0, 1]");
      }
      if (run.points < 2) r.issue("run.points", "out-of-range", "run.points must be >= 2");
      break;
    case ScenarioKind::reference_compare:
      if (r.present("run.dx")) positive(r, "run.dx", run.dx);
      if (!(run.courant > 0.0 && run.courant <= 0.99)) {
        r.issue("run.courant", "out-of-range", "run.courant must lie in (0, 0.99]");
      }
      positive(r, "run.pad_speed", run.pad_speed);
      positive(r, "run.budget", run.budget);
      for (double x : run.probes) {
        if (!(x > run.x_ref)) r.issue("run.probes", "out-of-range", "every probe must lie beyond run.x_ref");
      }
      if (r.present("run.x_ref") && !(run.x_ref > 0.0)) {
        r.issue("run.x_ref", "out-of-range", "run.x_ref must be positive (the source sits at x = 0)");
      }
      break;
    case ScenarioKind::split:
      break;
  }
  if (medium_ok && issues.empty()) check_bands(r, cfg);
  if (!issues.empty()) return result;

  // Resolved view: common keys, pulse keys when used, then the scenario's run keys.
  std::vector<std::string> keys = {"scenario"};
  keys.insert(keys.end(), kMediumKeys.begin(), kMediumKeys.end());
  if (uses_pulse(kind)) keys.insert(keys.end(), kPulseKeys.begin(), kPulseKeys.end());
  for (const auto& k : info.required) {
    if (k.rfind("run.", 0) == 0) keys.push_back(k);
  }
  for (const auto& k : info.optional) keys.push_back(k);
  keys.insert(keys.end(), kOutputKeys.begin(), kOutputKeys.end());

  const auto value_of = [&](const std::string& k) -> std::optional<std::string> {
    const auto num = [](double v) { return format_number(v); };
    const auto& p = cfg.medium;
    if (k == "scenario") return to_string(kind);
    if (k == "medium.units") return cfg.units == UnitSystem::si ? "si" : "normalized";
    if (k == "medium.omega_pe") return num(p.omega_pe);
    if (k == "medium.omega_pm") return num(p.omega_pm);
    if (k == "medium.c") return num(p.c);
    if (k == "medium.eps0") return num(p.eps0);
    if (k == "medium.mu0") return num(p.mu0);
    if (k == "medium.chi3") return num(p.chi3);
    if (k == "grid.n") return std::to_string(cfg.grid.n);
    if (k == "grid.dt") return num(cfg.dt());
    if (k == "pulse.shape") return cfg.pulse.shape == PulseShape::user_file ? "user-file" : "gaussian-modulated";
    if (k == "pulse.carrier") return cfg.pulse.carrier > 0.0 ? std::optional(num(cfg.pulse.carrier)) : std::nullopt;
    if (k == "pulse.width") return cfg.pulse.width > 0.0 ? std::optional(num(cfg.pulse.width)) : std::nullopt;
    if (k == "pulse.amplitude") return num(cfg.pulse.amplitude);
    if (k == "pulse.center") {
      if (cfg.pulse.shape == PulseShape::user_file) return std::nullopt;
      return num(cfg.pulse.center.value_or(0.25 * static_cast<double>(cfg.grid.n) * cfg.dt()));
    }
    if (k == "pulse.file") return cfg.pulse.file.empty() ? std::nullopt : std::optional(cfg.pulse.file);
    if (k == "pulse.boundary") {
      switch (cfg.pulse.boundary) {
        case BoundaryMode::left: return "left";
        case BoundaryMode::zero: return "zero";
        default: return "right";
      }
    }
    if (k == "run.x_end") return num(run.x_end);
    if (k == "run.stations") return std::to_string(run.stations);
    if (k == "run.steps") return std::to_string(run.steps.value_or(default_step_count(run.x_end, p)));
    if (k == "run.record_every") return std::to_string(run.record_every);
    if (k == "run.dealias") return run.dealias ? "true" : "false";
    if (k == "run.mu_model") return to_string(run.mu_model);
    if (k == "run.dimensionless") return run.dimensionless ? "true" : "false";
    if (k == "run.band_edge") return num(run.band_edge.value_or(0.1 * p.lower_edge()));
    if (k == "run.velocity") return num(run.velocity);
    if (k == "run.amplitude_r") return num(run.amplitude_r);
    if (k == "run.amplitude_l") return num(run.amplitude_l);
    if (k == "run.xi_end") return num(run.xi_end);
    if (k == "run.points") return std::to_string(run.points);
    if (k == "run.pi0") return num(run.pi0);
    if (k == "run.dpi0") return num(run.dpi0);
    if (k == "run.max_ratio") return num(run.max_ratio);
    if (k == "run.dx") return run.dx > 0.0 ? std::optional(num(run.dx)) : std::nullopt;
    if (k == "run.courant") return num(run.courant);
    if (k == "run.x_ref") return num(run.x_ref);
    if (k == "run.probes") {
      std::vector<std::string> xs;
      for (double x : run.probes) xs.push_back(num(x));
      return join(xs, ", ");
    }
    if (k == "run.pad_speed") return num(run.pad_speed);
    if (k == "run.budget") return num(run.budget);
    if (k == "run.convergence") return run.convergence ? "true" : "false";
    if (k == "output.directory") return cfg.output.directory;
    if (k == "output.formats") return cfg.output.spectra ? "series, spectra" : "series";
    return std::nullopt;
  };
  std::set<std::string> listed(keys.begin(), keys.end());
  for (const auto& k : keys) {
    if (auto v = value_of(k)) cfg.resolved.emplace_back(k, *v);
  }
  for (const auto& k : r.defaulted()) {
    if (listed.count(k)) cfg.defaulted.push_back(k);
  }
  if (!cfg.grid.dt && uses_pulse(kind)) cfg.defaulted.push_back("grid.dt");
  if (!cfg.pulse.center && uses_pulse(kind) && cfg.pulse.shape == PulseShape::gaussian_modulated) {
    cfg.defaulted.push_back("pulse.center");
  }
  std::sort(cfg.defaulted.begin(), cfg.defaulted.end());
  cfg.defaulted.erase(std::unique(cfg.defaulted.begin(), cfg.defaulted.end()), cfg.defaulted.end());
  result.config = std::move(cfg);
  return result;
}

std::string render_config(const ScenarioConfig& config) {
  std::string out;
  std::string section;
  for (const auto& [key, value] : config.resolved) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
      out += key + " = " + value + "\n";
      continue;
    }
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      out += "\n[" + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + value + "\n";
  }
  return out;
}

}  // namespace metapulse::scenario
