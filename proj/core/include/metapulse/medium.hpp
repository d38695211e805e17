#pragma once

// Lossless Drude medium: permittivity/permeability responses, the slowness
// symbol a(omega) and its low-frequency expansion, and field energy density.

#include <optional>
#include <vector>

namespace metapulse {

/// Physical constants and plasma frequencies of a lossless Drude medium.
struct DrudeParams {
  double omega_pe = 1.0;  ///< electric plasma frequency, rad/s
  double omega_pm = 1.0;  ///< magnetic plasma frequency, rad/s
  double c = 1.0;         ///< vacuum light speed, m/s
  double eps0 = 1.0;      ///< vacuum permittivity, F/m
  double mu0 = 1.0;       ///< vacuum permeability, H/m
  double chi3 = 0.0;      ///< Kerr coefficient, m^2/V^2

  /// Units with c = eps0 = mu0 = 1.
  static DrudeParams normalized(double omega_pe, double omega_pm, double chi3 = 0.0);
  /// SI vacuum constants; eps0 is derived from mu0 and c so that c^2 eps0 mu0 = 1.
  static DrudeParams si(double omega_pe, double omega_pm, double chi3 = 0.0);

  /// Throws InvalidParameter when an invariant is violated.
  void validate() const;

  double lower_edge() const;  ///< min(omega_pe, omega_pm)
  double upper_edge() const;  ///< max(omega_pe, omega_pm)
};

enum class Response { electric, magnetic };

enum class Band {
  lower,       ///< |omega| <= min plasma frequency: double-negative, a < 0
  evanescent,  ///< strictly between the plasma frequencies: a^2 < 0
  upper,       ///< |omega| >= max plasma frequency: a > 0
};

Band classify_band(const DrudeParams& params, double omega);

/// 1 - omega_p^2 / omega^2 for the selected response. Throws SingularFrequency at omega = 0.
double drude_response(Response kind, const DrudeParams& params, double omega);

/// c^-2 eps(omega) mu(omega), in s^2/m^2.
double a_squared(const DrudeParams& params, double omega);

/// Slowness symbol a(omega) in s/m. Negative in the lower band, positive in the
/// upper band, empty inside the evanescent band. Even in omega.
std::optional<double> a_symbol(const DrudeParams& params, double omega);

/// Coefficients of a three-term expansion of the slowness operator,
///   a ~ k_m2 d_t^-2 + k_0 + k_p2 d_t^2,
/// whose frequency symbol is -k_m2/omega^2 + k_0 - k_p2 omega^2.
struct TaylorA {
  double k_m2 = 0.0;
  double k_0 = 0.0;
  double k_p2 = 0.0;

  double symbol(double omega) const;
};

/// The closed-form coefficients published with the method (the k_0 and k_p2
/// entries do not match a direct expansion; see exact_taylor_coefficients).
TaylorA taylor_coefficients(const DrudeParams& params);

/// Coefficients obtained by expanding a(omega) directly around the d_t^-2 pole:
///   k_0 = (p^2 + q^2) / (2 c p q),  k_p2 = -(p^2 - q^2)^2 / (8 c p^3 q^3).
TaylorA exact_taylor_coefficients(const DrudeParams& params);

/// -omega_pe omega_pm / (c omega^2): the single retained term.
double a_leading(const DrudeParams& params, double omega);

/// |a_leading - a| / |a| in the lower band. Throws EvanescentBand outside it.
double taylor_truncation_error(const DrudeParams& params, double omega);

struct TaylorErrorPoint {
  double ratio = 0.0;                  ///< omega / omega_pe
  double omega = 0.0;                  ///< rad/s
  std::optional<double> relative_error;  ///< empty where omega leaves the lower band
};

/// Relative truncation error sampled at ratio = (i+1)/points * max_ratio, i in [0, points).
std::vector<TaylorErrorPoint> taylor_error_curve(const DrudeParams& params, double max_ratio,
                                                 std::size_t points);

/// W = d(omega eps)/d omega E^2 + d(omega mu)/d omega H^2
///   = (1 + omega_pe^2/omega^2) E^2 + (1 + omega_pm^2/omega^2) H^2.
double energy_density(const DrudeParams& params, double omega, double e, double h);

}  // namespace metapulse
