#pragma once

// Random test signals. Everything is seeded, so failures reproduce.

#include <cmath>
#include <random>

#include "metapulse/projectors.hpp"
#include "metapulse/spectral.hpp"
#include "metapulse/waves.hpp"

namespace metapulse::testing {

/// White Gaussian samples with DC and Nyquist removed.
inline Signal random_zero_mean(const TimeGrid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> v(grid.size());
  for (auto& x : v) x = normal(rng);
  return remove_mean_and_nyquist(Signal(grid, std::move(v)));
}

inline FieldPair random_field(const TimeGrid& grid, std::mt19937_64& rng) {
  Signal b = random_zero_mean(grid, rng);
  Signal e = random_zero_mean(grid, rng);
  return {std::move(b), std::move(e)};
}

/// Gaussian-modulated sine centred in the window, mean removed.
inline Signal wave_packet(const TimeGrid& grid, double carrier, double width, double amplitude = 1.0,
                          double center = -1.0) {
  if (center < 0.0) center = 0.5 * grid.window();
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double tau = grid.time(j) - center;
    v[j] = amplitude * std::exp(-tau * tau / (2.0 * width * width)) * std::sin(carrier * tau);
  }
  return remove_mean_and_nyquist(Signal(grid, std::move(v)));
}

/// Pure right-moving pair built from a packet: Pi = packet, Lambda = 0.
inline DirectedPair right_packet(const TimeGrid& grid, double carrier, double width, double amplitude = 1.0) {
  return {wave_packet(grid, carrier, width, amplitude), Signal(grid)};
}

inline double max_abs_diff(const Signal& x, const Signal& y) { return (x - y).peak(); }

/// max|x - y| / max|y| (or max|x - y| when y vanishes).
inline double rel_peak_diff(const Signal& x, const Signal& y) {
  const double ref = y.peak();
  const double d = (x - y).peak();
  return ref > 0.0 ? d / ref : d;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace metapulse::testing
