#pragma once

// Uniform periodic time grid, unitary DFT pair, and diagonal-in-frequency
// operators. Every convolution operator of the model (eps, mu, a, a^-1, d_t,
// d_t^-1, ...) is a Multiplier acting bin-wise on the spectrum.
//
// Frequency convention: f(t) = sum_k F_k exp(+i omega_k t) / sqrt(n), so d_t
// has symbol +i omega. Bins are stored in FFT order: index k < n/2 carries
// omega_k = 2 pi k / T, index k >= n/2 carries 2 pi (k - n) / T. Index n/2 is
// the unpaired Nyquist bin (omega = -pi/dt).

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "metapulse/medium.hpp"

namespace metapulse {

using Complex = std::complex<double>;

namespace detail {
struct FftPlans;
}

class TimeGrid {
 public:
  /// n must be a power of two, n >= 8; dt > 0.
  TimeGrid(std::size_t n, double dt);

  std::size_t size() const { return n_; }
  double dt() const { return dt_; }
  double window() const { return static_cast<double>(n_) * dt_; }
  double time(std::size_t j) const { return static_cast<double>(j) * dt_; }
  double omega(std::size_t k) const;
  std::size_t nyquist_index() const { return n_ / 2; }
  /// Bin spacing 2 pi / T.
  double d_omega() const;
  /// |index| relative to zero frequency: min(k, n - k).
  std::size_t wavenumber_index(std::size_t k) const { return k <= n_ / 2 ? k : n_ - k; }

  std::vector<double> omegas() const;

  bool operator==(const TimeGrid& other) const { return n_ == other.n_ && dt_ == other.dt_; }

  void forward(std::span<const Complex> in, std::span<Complex> out) const;
  void backward(std::span<const Complex> in, std::span<Complex> out) const;

 private:
  std::size_t n_;
  double dt_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

/// Real samples on a TimeGrid. Values must be finite.
class Signal {
 public:
  explicit Signal(TimeGrid grid);  // zeros
  Signal(TimeGrid grid, std::vector<double> samples);

  const TimeGrid& grid() const { return grid_; }
  std::size_t size() const { return samples_.size(); }
  std::span<const double> samples() const { return samples_; }
  std::vector<double>& data() { return samples_; }
  double operator[](std::size_t i) const { return samples_[i]; }
  double& operator[](std::size_t i) { return samples_[i]; }

  double peak() const;  ///< max |sample|
  double l2() const;    ///< sqrt(sum sample^2)
  double mean() const;

  Signal& operator+=(const Signal& other);
  Signal& operator-=(const Signal& other);
  Signal& operator*=(double s);

 private:
  TimeGrid grid_;
  std::vector<double> samples_;
};

Signal operator+(Signal a, const Signal& b);
Signal operator-(Signal a, const Signal& b);
Signal operator*(double s, Signal a);
Signal operator-(Signal a);

struct Spectrum {
  TimeGrid grid;
  std::vector<Complex> bins;
};

Spectrum to_spectrum(const Signal& signal);
/// Inverse transform keeping the real part. Use apply() when the imaginary
/// residue must be checked.
Signal from_spectrum(const Spectrum& spectrum);
/// Inverse transform; throws NumericalFailure when max |Im| exceeds
/// tolerance * max(max |Re|, scale) (or when the result is non-finite). Pass the
/// input magnitude as `scale` when the output may cancel down to round-off.
Signal from_spectrum_checked(const Spectrum& spectrum, double tolerance = 1e-10, double scale = 0.0);

enum class MultiplierKind { eps, mu, mu_inv, a, a_inv, a_sq, d_dt, d_dt_inv, custom };

std::string to_string(MultiplierKind kind);

/// Rule for the omega = 0 bin. Every model operator annihilates it.
enum class ZeroModeRule { annihilate };

struct Multiplier {
  TimeGrid grid;
  std::vector<Complex> values;
  MultiplierKind kind = MultiplierKind::custom;
  ZeroModeRule zero_mode_rule = ZeroModeRule::annihilate;

  /// values(-omega) == conj(values(omega)), real at DC and Nyquist.
  bool hermitian(double tolerance = 0.0) const;

  static Multiplier identity(const TimeGrid& grid);
};

/// Bin-wise product; both factors must share a grid.
Multiplier operator*(const Multiplier& lhs, const Multiplier& rhs);
Multiplier operator*(Complex s, Multiplier m);

inline constexpr double kDefaultTolA = 1e-6;

/// Builds the diagonal realization of a model operator on `grid`.
///   eps: eps0 eps(w)        mu: mu0 mu(w)       mu_inv: 1/(mu0 mu(w))
///   a: a(w)                 a_inv: 1/a(w)       a_sq: a(w)^2
///   d_dt: i w               d_dt_inv: 1/(i w)
/// The DC bin is annihilated for every kind; the Nyquist bin is annihilated for
/// d_dt and d_dt_inv, whose symbols are odd and cannot be real there.
/// Throws InadmissibleGrid if a/a_inv meets an evanescent bin, if |a| c < tol_a
/// for a_inv, or if mu(w) = 0 on a bin for mu_inv.
Multiplier make_multiplier(MultiplierKind kind, const DrudeParams& params, const TimeGrid& grid,
                           double tol_a = kDefaultTolA);

/// True when every nonzero bin is outside the evanescent band (and, when
/// `for_inverse`, |a| c >= tol_a).
bool admissible_for_slowness(const DrudeParams& params, const TimeGrid& grid, bool for_inverse,
                             double tol_a = kDefaultTolA, std::string* reason = nullptr);

/// from_spectrum(m.values * to_spectrum(s)), checking the imaginary residue
/// (<= 1e-10 of peak) and finiteness.
Signal apply(const Multiplier& m, const Signal& s);
Spectrum apply(const Multiplier& m, const Spectrum& s);

/// Zero the DC and Nyquist bins: projection onto the subspace on which every
/// model operator is invertible.
Signal remove_mean_and_nyquist(const Signal& s);

/// Keep only bins with lo <= |omega| <= hi.
Signal band_limit(const Signal& s, double omega_lo, double omega_hi);

/// |mean| / peak.
double dc_fraction(const Signal& s);
/// max |sample| over the first and last `edge` samples, divided by the peak.
double edge_fraction(const Signal& s, std::size_t edge = 8);

/// Spectral upsampling by an integer factor (zero padding, Nyquist bin split
/// evenly). Returns samples at spacing dt / factor over the same window.
std::vector<double> upsample(const Signal& s, std::size_t factor);

}  // namespace metapulse
