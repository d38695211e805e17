#include "metapulse/scenario/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "metapulse/errors.hpp"
#include "metapulse/scenario/tables.hpp"

namespace metapulse::scenario {

namespace {

Signal resample(const SampleFile& file, const TimeGrid& grid) {
  std::vector<double> out(grid.size(), 0.0);
  const auto& t = file.t;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double tj = grid.time(j);
    if (tj < t.front() || tj > t.back()) continue;
    auto hi = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), tj) - t.begin());
    if (t[hi] == tj) {
      out[j] = file.value[hi];
      continue;
    }
    const std::size_t lo = hi - 1;
    const double w = (tj - t[lo]) / (t[hi] - t[lo]);
    out[j] = (1.0 - w) * file.value[lo] + w * file.value[hi];
  }
  return Signal(grid, std::move(out));
}

void check_pulse(const Signal& s, const std::string& origin) {
  if (!(s.peak() > 0.0)) throw InvalidParameter(origin + ": pulse is identically zero on the grid");
  const double dc = dc_fraction(s);
  const double edge = edge_fraction(s);
  if (dc > kPulseTolerance || edge > kPulseTolerance) {
    std::ostringstream msg;
    msg << origin << ": DC fraction " << dc << " and edge fraction " << edge << " must both be <= "
        << kPulseTolerance << " of the peak";
    throw InvalidParameter(msg.str());
  }
}

}  // namespace

Signal synthesize_pulse(const PulseSpec& spec, const TimeGrid& grid, const std::filesystem::path& base) {
  if (spec.shape == PulseShape::user_file) {
    std::filesystem::path path = spec.file;
    if (path.is_relative() && !base.empty()) path = base / path;
    Signal s = resample(read_samples(path), grid);
    check_pulse(s, "pulse.file");
    return remove_mean_and_nyquist(s);
  }
  if (!(spec.carrier > 0.0) || !(spec.width > 0.0)) {
    throw InvalidParameter("pulse: carrier and width must be positive");
  }
  const double center = spec.center.value_or(0.25 * grid.window());
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double tau = grid.time(j) - center;
    v[j] = spec.amplitude * std::exp(-tau * tau / (2.0 * spec.width * spec.width)) * std::sin(spec.carrier * tau);
  }
  Signal s = remove_mean_and_nyquist(Signal(grid, std::move(v)));
  check_pulse(s, "pulse.width");
  return s;
}

BoundaryRegime make_boundary(const Signal& e, BoundaryMode mode, const DrudeParams& params, const TimeGrid& grid) {
  switch (mode) {
    case BoundaryMode::right:
      return {e, apply(make_multiplier(MultiplierKind::a, params, grid), e)};
    case BoundaryMode::left:
      return {e, -apply(make_multiplier(MultiplierKind::a, params, grid), e)};
    case BoundaryMode::zero:
      break;
  }
  return {e, Signal(grid)};
}

}  // namespace metapulse::scenario
