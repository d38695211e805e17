#include "metapulse/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "metapulse/errors.hpp"

namespace metapulse {

namespace detail {

// FFTW planning is not thread-safe; execution through the new-array interface
// is. Plans are built once per size under a global lock and shared by every
// grid of that size. FFTW_UNALIGNED keeps the chosen codelets independent of
// buffer alignment, so results are bit-reproducible across runs.
struct FftPlans {
  explicit FftPlans(std::size_t n) : n(n) {
    std::vector<Complex> in(n), out(n);
    auto* pin = reinterpret_cast<fftw_complex*>(in.data());
    auto* pout = reinterpret_cast<fftw_complex*>(out.data());
    const int size = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_dft_1d(size, pin, pout, FFTW_FORWARD, flags);
    backward = fftw_plan_dft_1d(size, pin, pout, FFTW_BACKWARD, flags);
  }
  ~FftPlans() {
    std::lock_guard lock(mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  static std::mutex& mutex() {
    static std::mutex m;
    return m;
  }

  static std::shared_ptr<const FftPlans> get(std::size_t n) {
    static std::map<std::size_t, std::shared_ptr<const FftPlans>> cache;
    std::lock_guard lock(mutex());
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<FftPlans>(n);
    return slot;
  }

  std::size_t n;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

}  // namespace detail

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what) {
  if (!(a == b)) {
    std::ostringstream msg;
    msg << what << ": grid mismatch (n=" << a.size() << ", dt=" << a.dt() << " vs n=" << b.size()
        << ", dt=" << b.dt() << ")";
    throw InadmissibleGrid(msg.str());
  }
}

void execute(fftw_plan plan, std::span<const Complex> in, std::span<Complex> out, std::size_t n) {
  if (in.size() != n || out.size() != n) throw InvalidParameter("FFT: length mismatch");
  // fftw_execute_dft does not modify the input of an out-of-place plan.
  auto* pin = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
  auto* pout = reinterpret_cast<fftw_complex*>(out.data());
  if (in.data() == out.data()) {
    std::vector<Complex> tmp(in.begin(), in.end());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()), pout);
  } else {
    fftw_execute_dft(plan, pin, pout);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : out) v *= scale;
}

}  // namespace

TimeGrid::TimeGrid(std::size_t n, double dt) : n_(n), dt_(dt) {
  if (n < 8 || !is_power_of_two(n)) {
    throw InvalidParameter("TimeGrid: n must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("TimeGrid: dt must be positive");
  plans_ = detail::FftPlans::get(n);
}

double TimeGrid::d_omega() const { return 2.0 * std::numbers::pi / window(); }

double TimeGrid::omega(std::size_t k) const {
  const auto signed_k = k < n_ / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n_);
  return signed_k * d_omega();
}

std::vector<double> TimeGrid::omegas() const {
  std::vector<double> w(n_);
  for (std::size_t k = 0; k < n_; ++k) w[k] = omega(k);
  return w;
}

void TimeGrid::forward(std::span<const Complex> in, std::span<Complex> out) const {
  execute(plans_->forward, in, out, n_);
}

void TimeGrid::backward(std::span<const Complex> in, std::span<Complex> out) const {
  execute(plans_->backward, in, out, n_);
}

Signal::Signal(TimeGrid grid) : grid_(std::move(grid)), samples_(grid_.size(), 0.0) {}

Signal::Signal(TimeGrid grid, std::vector<double> samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size()) {
    throw InvalidParameter("Signal: " + std::to_string(samples_.size()) + " samples for a grid of " +
                           std::to_string(grid_.size()));
  }
  for (double v : samples_) {
    if (!std::isfinite(v)) throw NumericalFailure("Signal: non-finite sample");
  }
}

double Signal::peak() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double Signal::l2() const {
  double s = 0.0;
  for (double v : samples_) s += v * v;
  return std::sqrt(s);
}

double Signal::mean() const {
  double s = 0.0;
  for (double v : samples_) s += v;
  return s / static_cast<double>(samples_.size());
}

Signal& Signal::operator+=(const Signal& other) {
  require_same_grid(grid_, other.grid_, "Signal +=");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
  return *this;
}

Signal& Signal::operator-=(const Signal& other) {
  require_same_grid(grid_, other.grid_, "Signal -=");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= other.samples_[i];
  return *this;
}

Signal& Signal::operator*=(double s) {
  for (double& v : samples_) v *= s;
  return *this;
}

Signal operator+(Signal a, const Signal& b) { return a += b; }
Signal operator-(Signal a, const Signal& b) { return a -= b; }
Signal operator*(double s, Signal a) { return a *= s; }
Signal operator-(Signal a) { return a *= -1.0; }

Spectrum to_spectrum(const Signal& signal) {
  const auto& grid = signal.grid();
  std::vector<Complex> in(signal.samples().begin(), signal.samples().end());
  Spectrum out{grid, std::vector<Complex>(grid.size())};
  grid.forward(in, out.bins);
  return out;
}

Signal from_spectrum(const Spectrum& spectrum) {
  const auto& grid = spectrum.grid;
  if (spectrum.bins.size() != grid.size()) throw InvalidParameter("from_spectrum: length mismatch");
  std::vector<Complex> out(grid.size());
  grid.backward(spectrum.bins, out);
  std::vector<double> re(grid.size());
  for (std::size_t i = 0; i < re.size(); ++i) re[i] = out[i].real();
  return Signal(grid, std::move(re));
}

Signal from_spectrum_checked(const Spectrum& spectrum, double tolerance, double scale) {
  const auto& grid = spectrum.grid;
  if (spectrum.bins.size() != grid.size()) throw InvalidParameter("from_spectrum: length mismatch");
  std::vector<Complex> out(grid.size());
  grid.backward(spectrum.bins, out);
  double peak_re = 0.0;
  double peak_im = 0.0;
  std::vector<double> re(grid.size());
  for (std::size_t i = 0; i < re.size(); ++i) {
    if (!std::isfinite(out[i].real()) || !std::isfinite(out[i].imag())) {
      throw NumericalFailure("spectral product produced non-finite samples");
    }
    re[i] = out[i].real();
    peak_re = std::max(peak_re, std::abs(out[i].real()));
    peak_im = std::max(peak_im, std::abs(out[i].imag()));
  }
  if (peak_im > tolerance * std::max(peak_re, scale) && peak_im > 0.0) {
    std::ostringstream msg;
    msg << "spectral product is not real: imaginary residue " << peak_im << " vs peak " << peak_re;
    throw NumericalFailure(msg.str());
  }
  return Signal(grid, std::move(re));
}

std::string to_string(MultiplierKind kind) {
  switch (kind) {
    case MultiplierKind::eps: return "eps";
    case MultiplierKind::mu: return "mu";
    case MultiplierKind::mu_inv: return "mu_inv";
    case MultiplierKind::a: return "a";
    case MultiplierKind::a_inv: return "a_inv";
    case MultiplierKind::a_sq: return "a_sq";
    case MultiplierKind::d_dt: return "d_dt";
    case MultiplierKind::d_dt_inv: return "d_dt_inv";
    case MultiplierKind::custom: return "custom";
  }
  return "unknown";
}

bool Multiplier::hermitian(double tolerance) const {
  const std::size_t n = values.size();
  auto close = [tolerance](Complex x, Complex y) {
    return std::abs(x - y) <= tolerance * std::max({1.0, std::abs(x), std::abs(y)});
  };
  if (std::abs(values[0].imag()) > tolerance * std::max(1.0, std::abs(values[0]))) return false;
  if (std::abs(values[n / 2].imag()) > tolerance * std::max(1.0, std::abs(values[n / 2]))) return false;
  for (std::size_t k = 1; k < n / 2; ++k) {
    if (!close(values[n - k], std::conj(values[k]))) return false;
  }
  return true;
}

Multiplier Multiplier::identity(const TimeGrid& grid) {
  return Multiplier{grid, std::vector<Complex>(grid.size(), Complex{1.0, 0.0}), MultiplierKind::custom,
                    ZeroModeRule::annihilate};
}

Multiplier operator*(const Multiplier& lhs, const Multiplier& rhs) {
  require_same_grid(lhs.grid, rhs.grid, "Multiplier product");
  Multiplier out{lhs.grid, lhs.values, MultiplierKind::custom, ZeroModeRule::annihilate};
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] *= rhs.values[k];
  return out;
}

Multiplier operator*(Complex s, Multiplier m) {
  for (auto& v : m.values) v *= s;
  m.kind = MultiplierKind::custom;
  return m;
}

bool admissible_for_slowness(const DrudeParams& params, const TimeGrid& grid, bool for_inverse,
                             double tol_a, std::string* reason) {
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double w = grid.omega(k);
    const auto a = a_symbol(params, w);
    if (!a) {
      if (reason) {
        std::ostringstream msg;
        msg << "bin " << k << " (omega = " << w << ") lies in the evanescent band (" << params.lower_edge()
            << ", " << params.upper_edge() << ")";
        *reason = msg.str();
      }
      return false;
    }
    if (for_inverse && std::abs(*a) * params.c < tol_a) {
      if (reason) {
        std::ostringstream msg;
        msg << "bin " << k << " (omega = " << w << ") has |a| c = " << std::abs(*a) * params.c
            << " below tol_a = " << tol_a;
        *reason = msg.str();
      }
      return false;
    }
  }
  return true;
}

Multiplier make_multiplier(MultiplierKind kind, const DrudeParams& params, const TimeGrid& grid,
                           double tol_a) {
  params.validate();
  if (kind == MultiplierKind::a || kind == MultiplierKind::a_inv) {
    std::string reason;
    if (!admissible_for_slowness(params, grid, kind == MultiplierKind::a_inv, tol_a, &reason)) {
      throw InadmissibleGrid("make_multiplier(" + to_string(kind) + "): " + reason);
    }
  }
  Multiplier m{grid, std::vector<Complex>(grid.size(), Complex{}), kind, ZeroModeRule::annihilate};
  const std::size_t nyq = grid.nyquist_index();
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double w = grid.omega(k);
    Complex v;
    switch (kind) {
      case MultiplierKind::eps:
        v = params.eps0 * drude_response(Response::electric, params, w);
        break;
      case MultiplierKind::mu:
        v = params.mu0 * drude_response(Response::magnetic, params, w);
        break;
      case MultiplierKind::mu_inv: {
        const double mu = drude_response(Response::magnetic, params, w);
        if (mu == 0.0) {
          throw InadmissibleGrid("make_multiplier(mu_inv): mu vanishes on bin " + std::to_string(k));
        }
        v = 1.0 / (params.mu0 * mu);
        break;
      }
      case MultiplierKind::a:
        v = *a_symbol(params, w);
        break;
      case MultiplierKind::a_inv:
        v = 1.0 / *a_symbol(params, w);
        break;
      case MultiplierKind::a_sq:
        v = a_squared(params, w);
        break;
      case MultiplierKind::d_dt:
        v = k == nyq ? Complex{} : Complex{0.0, w};
        break;
      case MultiplierKind::d_dt_inv:
        v = k == nyq ? Complex{} : Complex{0.0, -1.0 / w};
        break;
      case MultiplierKind::custom:
        throw InvalidParameter("make_multiplier: custom multipliers are built directly");
    }
    m.values[k] = v;
  }
  return m;
}

Spectrum apply(const Multiplier& m, const Spectrum& s) {
  require_same_grid(m.grid, s.grid, "apply");
  Spectrum out = s;
  for (std::size_t k = 0; k < out.bins.size(); ++k) out.bins[k] *= m.values[k];
  return out;
}

Signal apply(const Multiplier& m, const Signal& s) {
  require_same_grid(m.grid, s.grid(), "apply");
  double gain = 0.0;
  for (const auto& v : m.values) gain = std::max(gain, std::abs(v));
  return from_spectrum_checked(apply(m, to_spectrum(s)), 1e-10, gain * s.peak());
}

Signal remove_mean_and_nyquist(const Signal& s) {
  auto spec = to_spectrum(s);
  spec.bins[0] = 0.0;
  spec.bins[s.grid().nyquist_index()] = 0.0;
  return from_spectrum(spec);
}

Signal band_limit(const Signal& s, double omega_lo, double omega_hi) {
  auto spec = to_spectrum(s);
  for (std::size_t k = 0; k < spec.bins.size(); ++k) {
    const double w = std::abs(s.grid().omega(k));
    if (w < omega_lo || w > omega_hi || k == s.grid().nyquist_index()) spec.bins[k] = 0.0;
  }
  return from_spectrum(spec);
}

double dc_fraction(const Signal& s) {
  const double peak = s.peak();
  return peak == 0.0 ? 0.0 : std::abs(s.mean()) / peak;
}

double edge_fraction(const Signal& s, std::size_t edge) {
  const double peak = s.peak();
  if (peak == 0.0) return 0.0;
  edge = std::min(edge, s.size() / 2);
  double m = 0.0;
  for (std::size_t i = 0; i < edge; ++i) {
    m = std::max({m, std::abs(s[i]), std::abs(s[s.size() - 1 - i])});
  }
  return m / peak;
}

std::vector<double> upsample(const Signal& s, std::size_t factor) {
  if (factor == 0 || !is_power_of_two(factor)) {
    throw InvalidParameter("upsample: factor must be a power of two");
  }
  if (factor == 1) return {s.samples().begin(), s.samples().end()};
  const std::size_t n = s.size();
  const std::size_t big = n * factor;
  const TimeGrid fine(big, s.grid().dt() / static_cast<double>(factor));
  const auto spec = to_spectrum(s);
  std::vector<Complex> padded(big, Complex{});
  // Unitary scaling: amplitudes grow by sqrt(factor) on the finer grid.
  const double gain = std::sqrt(static_cast<double>(factor));
  for (std::size_t k = 0; k < n / 2; ++k) padded[k] = gain * spec.bins[k];
  for (std::size_t k = n / 2 + 1; k < n; ++k) padded[big - n + k] = gain * spec.bins[k];
  const Complex nyq = gain * spec.bins[n / 2];
  padded[n / 2] = 0.5 * nyq;
  padded[big - n / 2] = 0.5 * nyq;
  std::vector<Complex> out(big);
  fine.backward(padded, out);
  std::vector<double> re(big);
  for (std::size_t i = 0; i < big; ++i) re[i] = out[i].real();
  return re;
}

}  // namespace metapulse
