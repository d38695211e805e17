#include "metapulse/medium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "metapulse/errors.hpp"

namespace metapulse {

namespace {

constexpr double kSpeedOfLight = 299792458.0;
constexpr double kVacuumPermeability = 1.25663706212e-6;

void require_nonzero(double omega, const char* what) {
  if (omega == 0.0 || !std::isfinite(omega)) {
    std::ostringstream msg;
    msg << what << ": singular at omega = " << omega;
    throw SingularFrequency(msg.str());
  }
}

}  // namespace

DrudeParams DrudeParams::normalized(double omega_pe, double omega_pm, double chi3) {
  DrudeParams p;
  p.omega_pe = omega_pe;
  p.omega_pm = omega_pm;
  p.c = 1.0;
  p.eps0 = 1.0;
  p.mu0 = 1.0;
  p.chi3 = chi3;
  p.validate();
  return p;
}

DrudeParams DrudeParams::si(double omega_pe, double omega_pm, double chi3) {
  DrudeParams p;
  p.omega_pe = omega_pe;
  p.omega_pm = omega_pm;
  p.c = kSpeedOfLight;
  p.mu0 = kVacuumPermeability;
  p.eps0 = 1.0 / (p.mu0 * p.c * p.c);
  p.chi3 = chi3;
  p.validate();
  return p;
}

void DrudeParams::validate() const {
  std::ostringstream msg;
  if (!(omega_pe > 0.0) || !std::isfinite(omega_pe)) msg << "omega_pe must be positive; ";
  if (!(omega_pm > 0.0) || !std::isfinite(omega_pm)) msg << "omega_pm must be positive; ";
  if (!(c > 0.0) || !std::isfinite(c)) msg << "c must be positive; ";
  if (!(eps0 > 0.0) || !(mu0 > 0.0)) msg << "eps0 and mu0 must be positive; ";
  if (msg.str().empty()) {
    const double closure = c * c * eps0 * mu0;
    if (std::abs(closure - 1.0) > 1e-12) msg << "c^2 eps0 mu0 = " << closure << " != 1; ";
  }
  if (!(chi3 >= 0.0) || !std::isfinite(chi3)) msg << "chi3 must be finite and non-negative; ";
  if (!msg.str().empty()) throw InvalidParameter("DrudeParams: " + msg.str());
}

double DrudeParams::lower_edge() const { return std::min(omega_pe, omega_pm); }
double DrudeParams::upper_edge() const { return std::max(omega_pe, omega_pm); }

Band classify_band(const DrudeParams& params, double omega) {
  const double w = std::abs(omega);
  if (w <= params.lower_edge()) return Band::lower;
  if (w >= params.upper_edge()) return Band::upper;
  return Band::evanescent;
}

double drude_response(Response kind, const DrudeParams& params, double omega) {
  require_nonzero(omega, "drude_response");
  const double wp = kind == Response::electric ? params.omega_pe : params.omega_pm;
  return 1.0 - (wp * wp) / (omega * omega);
}

double a_squared(const DrudeParams& params, double omega) {
  require_nonzero(omega, "a_squared");
  const double eps = drude_response(Response::electric, params, omega);
  const double mu = drude_response(Response::magnetic, params, omega);
  return eps * mu / (params.c * params.c);
}

std::optional<double> a_symbol(const DrudeParams& params, double omega) {
  require_nonzero(omega, "a_symbol");
  const Band band = classify_band(params, omega);
  if (band == Band::evanescent) return std::nullopt;
  const double eps = drude_response(Response::electric, params, omega);
  const double mu = drude_response(Response::magnetic, params, omega);
  // Both factors share a sign outside the evanescent band; the product can
  // still round to a tiny negative number at a band edge.
  const double magnitude = std::sqrt(std::max(eps * mu, 0.0)) / params.c;
  return band == Band::lower ? -magnitude : magnitude;
}

double TaylorA::symbol(double omega) const {
  require_nonzero(omega, "TaylorA::symbol");
  return -k_m2 / (omega * omega) + k_0 - k_p2 * omega * omega;
}

TaylorA taylor_coefficients(const DrudeParams& params) {
  const double p = params.omega_pe;
  const double q = params.omega_pm;
  const double pq = p * q;
  const double sum = p * p + q * q;
  TaylorA t;
  t.k_m2 = pq / params.c;
  t.k_0 = -0.5 * sum / pq / params.c;
  t.k_p2 = (1.0 / (2.0 * pq) + sum * sum / (8.0 * pq * pq * pq)) / params.c;
  return t;
}

TaylorA exact_taylor_coefficients(const DrudeParams& params) {
  const double p = params.omega_pe;
  const double q = params.omega_pm;
  const double pq = p * q;
  const double diff = p * p - q * q;
  TaylorA t;
  t.k_m2 = pq / params.c;
  t.k_0 = 0.5 * (p * p + q * q) / pq / params.c;
  t.k_p2 = -diff * diff / (8.0 * pq * pq * pq) / params.c;
  return t;
}

double a_leading(const DrudeParams& params, double omega) {
  require_nonzero(omega, "a_leading");
  return -params.omega_pe * params.omega_pm / (params.c * omega * omega);
}

double taylor_truncation_error(const DrudeParams& params, double omega) {
  require_nonzero(omega, "taylor_truncation_error");
  if (classify_band(params, omega) != Band::lower) {
    std::ostringstream msg;
    msg << "taylor_truncation_error: omega = " << omega << " is outside the lower band (0, "
        << params.lower_edge() << "]";
    throw EvanescentBand(msg.str());
  }
  const double exact = *a_symbol(params, omega);
  const double lead = a_leading(params, omega);
  return std::abs(lead - exact) / std::abs(exact);
}

std::vector<TaylorErrorPoint> taylor_error_curve(const DrudeParams& params, double max_ratio,
                                                 std::size_t points) {
  std::vector<TaylorErrorPoint> curve;
  curve.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    TaylorErrorPoint pt;
    pt.ratio = max_ratio * static_cast<double>(i + 1) / static_cast<double>(points);
    pt.omega = pt.ratio * params.omega_pe;
    // Exactly at the lower edge a = 0 and the relative error is undefined.
    if (classify_band(params, pt.omega) == Band::lower && pt.omega < params.lower_edge()) {
      pt.relative_error = taylor_truncation_error(params, pt.omega);
    }
    curve.push_back(pt);
  }
  return curve;
}

double energy_density(const DrudeParams& params, double omega, double e, double h) {
  require_nonzero(omega, "energy_density");
  const double w2 = omega * omega;
  const double de = 1.0 + params.omega_pe * params.omega_pe / w2;
  const double dm = 1.0 + params.omega_pm * params.omega_pm / w2;
  return de * e * e + dm * h * h;
}

}  // namespace metapulse
