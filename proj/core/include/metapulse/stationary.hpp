#pragma once

// Traveling profiles depending only on xi = x - v t.

#include <cstddef>
#include <span>
#include <vector>

#include "metapulse/medium.hpp"

namespace metapulse {

struct StationaryParams {
  double v = 0.0;        ///< profile speed, m/s
  double k = 0.0;        ///< wavenumber, 1/m; k omega = p q / c
  double omega = 0.0;    ///< rad/s; omega = v k
  double big_k_v = 0.0;  ///< mu0 chi3 c^3 v^6 / (2 p^3 q)
};

/// k = sqrt(p q / (c v)), omega = v k. Throws InvalidParameter for v <= 0.
StationaryParams stationary_params(double v, const DrudeParams& params);

/// R(xi) = A exp(k xi). Grows in xi; at fixed x it decays in t for v > 0.
std::vector<double> linear_r_profile(double amplitude, const StationaryParams& sp, std::span<const double> xi);
/// L(xi) = B sin(k xi).
std::vector<double> linear_l_profile(double amplitude, const StationaryParams& sp, std::span<const double> xi);

/// The unique real root y of c y + p q Pi + K_v y^3 = 0 (Cardano, hyperbolic
/// form, followed by one Newton polish).
double cardano_f(double pi_value, const StationaryParams& sp, const DrudeParams& params);

struct SeriesValue {
  double value = 0.0;
  bool within_radius = true;
};

/// Radius in Pi of the small-amplitude expansion of cardano_f: the branch
/// points of the cubic, |Pi| = (2c / (3pq)) sqrt(c / (3 K_v)). Infinite for K_v = 0.
double series_radius(const StationaryParams& sp, const DrudeParams& params);

/// order 1: -(pq/c) Pi;  order 3: -(pq/c) Pi + K_v (pq)^3 / c^4 Pi^3.
/// Inputs beyond series_radius are evaluated but flagged and logged.
SeriesValue series_f(double pi_value, const StationaryParams& sp, const DrudeParams& params, int order);

struct Profile {
  std::vector<double> xi;
  std::vector<double> value;
  std::vector<double> slope;
};

/// RK4 for Pi'' = cardano_f(Pi) from (pi0, dpi0) at xi = 0 to xi_end.
Profile integrate_oscillator(double pi0, double dpi0, double xi_end, std::size_t n_steps, const StationaryParams& sp,
                             const DrudeParams& params);

}  // namespace metapulse
