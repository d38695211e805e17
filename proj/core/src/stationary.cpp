#include "metapulse/stationary.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "metapulse/errors.hpp"

namespace metapulse {

StationaryParams stationary_params(double v, const DrudeParams& params) {
  params.validate();
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidParameter("stationary_params: v must be positive");
  const double p = params.omega_pe;
  const double q = params.omega_pm;
  StationaryParams sp;
  sp.v = v;
  sp.k = std::sqrt(p * q / (params.c * v));
  sp.omega = v * sp.k;
  const double c3 = params.c * params.c * params.c;
  sp.big_k_v = params.mu0 * params.chi3 * c3 * std::pow(v, 6) / (2.0 * p * p * p * q);
  return sp;
}

std::vector<double> linear_r_profile(double amplitude, const StationaryParams& sp, std::span<const double> xi) {
  std::vector<double> out(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) out[i] = amplitude * std::exp(sp.k * xi[i]);
  return out;
}

std::vector<double> linear_l_profile(double amplitude, const StationaryParams& sp, std::span<const double> xi) {
  std::vector<double> out(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) out[i] = amplitude * std::sin(sp.k * xi[i]);
  return out;
}

double cardano_f(double pi_value, const StationaryParams& sp, const DrudeParams& params) {
  const double c = params.c;
  const double pq = params.omega_pe * params.omega_pm;
  const double kv = sp.big_k_v;
  if (kv < 0.0) throw InvalidParameter("cardano_f: negative Kerr coefficient");
  const double linear = -pq * pi_value / c;
  if (kv == 0.0 || pi_value == 0.0) return linear;
  // y^3 + P y + Q = 0 with P = c/K_v > 0, Q = pq Pi / K_v. Writing s = sqrt(3 K_v / c):
  //   y = -(2/s) sinh( asinh( (3/2) (pq Pi / c) s ) / 3 ).
  const double s = std::sqrt(3.0 * kv / c);
  double y = -(2.0 / s) * std::sinh(std::asinh(1.5 * (pq * pi_value / c) * s) / 3.0);
  const double g = c * y + pq * pi_value + kv * y * y * y;
  y -= g / (c + 3.0 * kv * y * y);
  return y;
}

double series_radius(const StationaryParams& sp, const DrudeParams& params) {
  if (sp.big_k_v <= 0.0) return std::numeric_limits<double>::infinity();
  const double c = params.c;
  const double pq = params.omega_pe * params.omega_pm;
  return (2.0 * c / (3.0 * pq)) * std::sqrt(c / (3.0 * sp.big_k_v));
}

SeriesValue series_f(double pi_value, const StationaryParams& sp, const DrudeParams& params, int order) {
  if (order != 1 && order != 3) throw InvalidParameter("series_f: order must be 1 or 3");
  const double c = params.c;
  const double pq = params.omega_pe * params.omega_pm;
  SeriesValue out;
  out.value = -pq * pi_value / c;
  if (order == 3) {
    const double c4 = c * c * c * c;
    out.value += sp.big_k_v * pq * pq * pq / c4 * pi_value * pi_value * pi_value;
  }
  const double radius = series_radius(sp, params);
  if (std::abs(pi_value) >= radius) {
    out.within_radius = false;
    spdlog::warn("series_f: |Pi| = {} is outside the series radius {}", std::abs(pi_value), radius);
  }
  return out;
}

Profile integrate_oscillator(double pi0, double dpi0, double xi_end, std::size_t n_steps, const StationaryParams& sp,
                             const DrudeParams& params) {
  if (n_steps < 4) throw InvalidParameter("integrate_oscillator: n_steps must be >= 4");
  if (!std::isfinite(xi_end)) throw InvalidParameter("integrate_oscillator: xi_end must be finite");
  const double h = xi_end / static_cast<double>(n_steps);
  auto f = [&](double u) { return cardano_f(u, sp, params); };
  Profile out;
  out.xi.reserve(n_steps + 1);
  out.value.reserve(n_steps + 1);
  out.slope.reserve(n_steps + 1);
  double u = pi0;
  double s = dpi0;
  out.xi.push_back(0.0);
  out.value.push_back(u);
  out.slope.push_back(s);
  for (std::size_t i = 1; i <= n_steps; ++i) {
    const double k1u = s;
    const double k1s = f(u);
    const double k2u = s + 0.5 * h * k1s;
    const double k2s = f(u + 0.5 * h * k1u);
    const double k3u = s + 0.5 * h * k2s;
    const double k3s = f(u + 0.5 * h * k2u);
    const double k4u = s + h * k3s;
    const double k4s = f(u + h * k3u);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    s += h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
    if (!std::isfinite(u) || !std::isfinite(s)) {
      std::ostringstream msg;
      msg << "integrate_oscillator: non-finite state at xi = " << static_cast<double>(i) * h << " (Pi = " << u
          << ", Pi' = " << s << "); last finite xi = " << out.xi.back();
      throw NumericalFailure(msg.str());
    }
    out.xi.push_back(static_cast<double>(i) * h);
    out.value.push_back(u);
    out.slope.push_back(s);
  }
  return out;
}

}  // namespace metapulse
