#pragma once

#include <filesystem>

#include "metapulse/scenario/config.hpp"
#include "metapulse/spectral.hpp"
#include "metapulse/waves.hpp"

namespace metapulse::scenario {

/// Relative DC and edge thresholds a boundary signal must meet.
inline constexpr double kPulseTolerance = 1e-8;

/// Boundary E signal on `grid`. Gaussian-modulated pulses are
/// A exp(-(t - t_c)^2 / (2 w^2)) sin(w0 (t - t_c)) with the mean and Nyquist
/// content removed; file pulses are linearly resampled (zero outside the file's
/// time span). Throws InvalidParameter when the DC content or the edge
/// amplitude exceeds kPulseTolerance of the peak. Relative file paths resolve
/// against `base`.
Signal synthesize_pulse(const PulseSpec& spec, const TimeGrid& grid, const std::filesystem::path& base = {});

/// Boundary regime with j = `e` and k chosen by `spec.boundary`.
BoundaryRegime make_boundary(const Signal& e, BoundaryMode mode, const DrudeParams& params, const TimeGrid& grid);

}  // namespace metapulse::scenario
