#include "metapulse/evolution.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "metapulse/errors.hpp"

namespace metapulse {

namespace {

using Bins = std::vector<Complex>;

void require_admissible(const DrudeParams& params, const TimeGrid& grid, double tol_a, const char* what) {
  std::string reason;
  if (!admissible_for_slowness(params, grid, true, tol_a, &reason)) {
    throw InadmissibleGrid(std::string(what) + ": " + reason);
  }
}

void require_grid(const DirectedPair& dp, const TimeGrid& grid, const char* what) {
  if (!(dp.pi.grid() == grid) || !(dp.lambda.grid() == grid)) {
    throw InadmissibleGrid(std::string(what) + ": directed pair is not sampled on the requested grid");
  }
}

// Multiplies Pi by `phase(k)` and Lambda by its conjugate, annihilating DC and Nyquist.
template <typename PhaseFn>
DirectedPair apply_phase(const DirectedPair& dp, const TimeGrid& grid, PhaseFn phase) {
  auto pi = to_spectrum(dp.pi);
  auto lambda = to_spectrum(dp.lambda);
  const std::size_t nyq = grid.nyquist_index();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k == 0 || k == nyq) {
      pi.bins[k] = 0.0;
      lambda.bins[k] = 0.0;
      continue;
    }
    const double theta = phase(k);
    const Complex f = std::polar(1.0, theta);
    pi.bins[k] *= f;
    lambda.bins[k] *= std::conj(f);
  }
  return {from_spectrum_checked(pi, 1e-10, dp.pi.peak()), from_spectrum_checked(lambda, 1e-10, dp.lambda.peak())};
}

std::vector<bool> dealias_mask(const TimeGrid& grid) {
  const std::size_t cutoff = grid.size() / 3;
  std::vector<bool> keep(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) keep[k] = grid.wavenumber_index(k) <= cutoff;
  return keep;
}

Multiplier annihilate_nyquist(Multiplier m) {
  m.values[0] = 0.0;
  m.values[m.grid.nyquist_index()] = 0.0;
  return m;
}

bool finite(const Bins& v) {
  for (const auto& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

class Marcher {
 public:
  explicit Marcher(const KerrSystem& system)
      : sys_(system), grid_(system.field_map.grid), n_(grid_.size()), mask_(dealias_mask(grid_)),
        work_(n_), real_(n_) {}

  // Kerr source spectrum S for the current state.
  Bins source(const Bins& pi, const Bins& lambda) {
    Bins e(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      const Complex d = sys_.unidirectional ? pi[k] : pi[k] - lambda[k];
      e[k] = sys_.field_map.values[k] * d;
      if (sys_.dealias && !mask_[k]) e[k] = 0.0;
    }
    grid_.backward(e, work_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double v = work_[i].real();
      real_[i] = Complex{v * v * v, 0.0};
    }
    grid_.forward(real_, e);
    for (std::size_t k = 0; k < n_; ++k) {
      e[k] *= sys_.source_map.values[k];
      if (sys_.dealias && !mask_[k]) e[k] = 0.0;
    }
    return e;
  }

 private:
  const KerrSystem& sys_;
  const TimeGrid& grid_;
  std::size_t n_;
  std::vector<bool> mask_;
  Bins work_;
  Bins real_;
};

Signal to_signal(const TimeGrid& grid, const Bins& bins) { return from_spectrum(Spectrum{grid, bins}); }

}  // namespace

std::string to_string(MuModel model) { return model == MuModel::dominant ? "dominant" : "full"; }

KerrCoupling kerr_coupling(const DrudeParams& params) {
  params.validate();
  const double p = params.omega_pe;
  const double q = params.omega_pm;
  const double c3 = params.c * params.c * params.c;
  KerrCoupling k;
  k.big_k = params.mu0 * params.chi3 * c3 / (2.0 * p * p * p * q);
  k.alpha = params.chi3 > 0.0 ? std::sqrt(2.0 * p * p * p * p * q * q / (params.mu0 * params.chi3 * c3))
                              : std::numeric_limits<double>::infinity();
  k.beta = params.c / (p * q);
  return k;
}

std::size_t default_step_count(double x_end, const DrudeParams& params) {
  const double beta = params.c / (params.omega_pe * params.omega_pm);
  const auto steps = static_cast<std::size_t>(std::ceil(50.0 * std::abs(x_end) / beta - 1e-9));
  return std::max<std::size_t>(steps, 4);
}

DirectedPair propagate_linear_exact(const DirectedPair& dp0, double x, const DrudeParams& params,
                                    const TimeGrid& grid, double tol_a) {
  if (!(x >= 0.0)) throw InvalidParameter("propagate_linear_exact: x must be non-negative");
  require_grid(dp0, grid, "propagate_linear_exact");
  require_admissible(params, grid, tol_a, "propagate_linear_exact");
  return apply_phase(dp0, grid, [&](std::size_t k) {
    const double w = grid.omega(k);
    return -w * *a_symbol(params, w) * x;
  });
}

DirectedPair propagate_kg(const DirectedPair& dp0, double x, const DrudeParams& params, const TimeGrid& grid,
                          double tol_a) {
  if (!(x >= 0.0)) throw InvalidParameter("propagate_kg: x must be non-negative");
  require_grid(dp0, grid, "propagate_kg");
  require_admissible(params, grid, tol_a, "propagate_kg");
  {
    const auto pi = to_spectrum(dp0.pi);
    const auto lambda = to_spectrum(dp0.lambda);
    double total = 0.0;
    double high = 0.0;
    const double limit = 0.5 * params.lower_edge();
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double e = std::norm(pi.bins[k]) + std::norm(lambda.bins[k]);
      total += e;
      if (std::abs(grid.omega(k)) > limit) high += e;
    }
    if (total > 0.0 && high > 1e-6 * total) {
      spdlog::warn("propagate_kg: {:.2e} of the spectral energy lies above 0.5 min(omega_pe, omega_pm)",
                   high / total);
    }
  }
  const double rate = params.omega_pe * params.omega_pm / params.c;
  return apply_phase(dp0, grid, [&](std::size_t k) { return rate * x / grid.omega(k); });
}

Signal build_nonlinearity(const Signal& e, const DrudeParams& params, MuModel model) {
  const auto& grid = e.grid();
  std::vector<double> cube(e.size());
  for (std::size_t i = 0; i < cube.size(); ++i) cube[i] = e[i] * e[i] * e[i];
  auto spec = to_spectrum(Signal(grid, std::move(cube)));
  const double gain = 0.5 * params.chi3 * params.mu0;
  const double q2 = params.omega_pm * params.omega_pm;
  const std::size_t nyq = grid.nyquist_index();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k == 0 || k == nyq) {
      spec.bins[k] = 0.0;
      continue;
    }
    const double w = grid.omega(k);
    Complex symbol{0.0, -q2 / w};  // q^2 / (i w)
    if (model == MuModel::full) symbol -= Complex{0.0, w};
    spec.bins[k] *= gain * symbol;
  }
  return from_spectrum_checked(spec);
}

KerrSystem physical_kerr_system(const DrudeParams& params, const TimeGrid& grid, const NonlinearOptions& options,
                                bool unidirectional) {
  params.validate();
  const double pq = params.omega_pe * params.omega_pm;
  Multiplier field_map = Multiplier::identity(grid);
  Multiplier source_map = Multiplier::identity(grid);
  const double gain = 0.5 * params.chi3 * params.mu0 / params.c;
  const double q2 = params.omega_pm * params.omega_pm;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double w = grid.omega(k);
    field_map.values[k] = -(params.c / pq) * w * w;
    if (k == 0) continue;
    Complex symbol{0.0, -q2 / w};
    if (options.mu_model == MuModel::full) symbol -= Complex{0.0, w};
    source_map.values[k] = gain * symbol;
  }
  return KerrSystem{pq / params.c, annihilate_nyquist(std::move(field_map)),
                    annihilate_nyquist(std::move(source_map)), options.dealias, unidirectional};
}

KerrSystem dimensionless_kerr_system(const TimeGrid& grid, const NonlinearOptions& options, bool unidirectional) {
  Multiplier source_map = Multiplier::identity(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) source_map.values[k] = Complex{0.0, grid.omega(k)};
  return KerrSystem{1.0, annihilate_nyquist(Multiplier::identity(grid)), annihilate_nyquist(std::move(source_map)),
                    options.dealias, unidirectional};
}

PropagationRecord march(const KerrSystem& system, const DirectedPair& dp0, double x_end, std::size_t n_steps,
                        std::size_t record_every) {
  const auto& grid = system.field_map.grid;
  require_grid(dp0, grid, "march");
  if (!(system.source_map.grid == grid)) throw InadmissibleGrid("march: source map on a different grid");
  if (n_steps < 4) throw InvalidParameter("march: n_steps must be >= 4");
  if (!(x_end > 0.0) || !std::isfinite(x_end)) throw InvalidParameter("march: x_end must be positive");
  record_every = std::max<std::size_t>(record_every, 1);

  const std::size_t n = grid.size();
  const std::size_t nyq = grid.nyquist_index();
  const double h = x_end / static_cast<double>(n_steps);

  // Exact linear factors for Pi over h and h/2; Lambda takes the conjugates.
  Bins full(n, Complex{}), half(n, Complex{});
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0 || k == nyq) continue;
    const double rate = system.mass / grid.omega(k);  // -mass / (i w) = i mass / w
    full[k] = std::polar(1.0, rate * h);
    half[k] = std::polar(1.0, 0.5 * rate * h);
  }

  Bins pi = to_spectrum(dp0.pi).bins;
  Bins lambda = to_spectrum(dp0.lambda).bins;
  for (std::size_t k : {std::size_t{0}, nyq}) {
    pi[k] = 0.0;
    lambda[k] = 0.0;
  }
  if (system.unidirectional) std::fill(lambda.begin(), lambda.end(), Complex{});

  PropagationRecord record;
  record.meta.n = n;
  record.meta.dt = grid.dt();
  record.meta.steps = n_steps;
  record.meta.dealias = system.dealias;
  auto push = [&](double x) {
    record.stations.push_back(x);
    record.states.push_back({to_signal(grid, pi), to_signal(grid, lambda)});
  };
  push(0.0);

  Marcher marcher(system);
  const bool coupled = !system.unidirectional;
  Bins tp(n), tl(n);
  for (std::size_t step = 1; step <= n_steps; ++step) {
    // Lawson RK4 in the variables v = exp(-L x) u.
    const Bins s1 = marcher.source(pi, lambda);
    for (std::size_t k = 0; k < n; ++k) {
      tp[k] = half[k] * (pi[k] - 0.5 * h * s1[k]);
      tl[k] = coupled ? std::conj(half[k]) * (lambda[k] + 0.5 * h * s1[k]) : Complex{};
    }
    const Bins s2 = marcher.source(tp, tl);
    for (std::size_t k = 0; k < n; ++k) {
      tp[k] = half[k] * pi[k] - 0.5 * h * s2[k];
      tl[k] = coupled ? std::conj(half[k]) * lambda[k] + 0.5 * h * s2[k] : Complex{};
    }
    const Bins s3 = marcher.source(tp, tl);
    for (std::size_t k = 0; k < n; ++k) {
      tp[k] = full[k] * pi[k] - h * half[k] * s3[k];
      tl[k] = coupled ? std::conj(full[k]) * lambda[k] + h * std::conj(half[k]) * s3[k] : Complex{};
    }
    const Bins s4 = marcher.source(tp, tl);
    for (std::size_t k = 0; k < n; ++k) {
      const Complex fh = half[k];
      const Complex ff = full[k];
      const Complex incr_pi = ff * s1[k] + 2.0 * fh * (s2[k] + s3[k]) + s4[k];
      pi[k] = ff * pi[k] - (h / 6.0) * incr_pi;
      if (coupled) {
        const Complex incr_l = std::conj(ff) * s1[k] + 2.0 * std::conj(fh) * (s2[k] + s3[k]) + s4[k];
        lambda[k] = std::conj(ff) * lambda[k] + (h / 6.0) * incr_l;
      }
    }
    if (!finite(pi) || !finite(lambda)) {
      std::ostringstream msg;
      msg << "non-finite state at x = " << static_cast<double>(step) * h << " (step " << step << " of " << n_steps
          << "); last valid station x = " << record.stations.back();
      throw BlowUpError(msg.str(), std::move(record));
    }
    if (step % record_every == 0 || step == n_steps) push(static_cast<double>(step) * h);
  }
  return record;
}

PropagationRecord propagate_nonlinear(const DirectedPair& dp0, double x_end, std::size_t n_steps,
                                      const DrudeParams& params, const TimeGrid& grid,
                                      const NonlinearOptions& options) {
  params.validate();
  require_admissible(params, grid, kDefaultTolA, "propagate_nonlinear");
  auto record = march(physical_kerr_system(params, grid, options), dp0, x_end, n_steps, options.record_every);
  record.meta.model = "kerr-coupled";
  record.meta.params = params;
  record.meta.mu_model = options.mu_model;
  return record;
}

PropagationRecord propagate_unidirectional(const Signal& pi0, double x_end, std::size_t n_steps,
                                           const DrudeParams& params, const TimeGrid& grid,
                                           const NonlinearOptions& options) {
  params.validate();
  require_admissible(params, grid, kDefaultTolA, "propagate_unidirectional");
  const DirectedPair dp0{pi0, Signal(grid)};
  auto record = march(physical_kerr_system(params, grid, options, true), dp0, x_end, n_steps, options.record_every);
  record.meta.model = "kerr-unidirectional";
  record.meta.params = params;
  record.meta.mu_model = options.mu_model;
  return record;
}

namespace {

Multiplier second_derivative_scaled(const TimeGrid& grid, double scale) {
  Multiplier m = Multiplier::identity(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double w = grid.omega(k);
    m.values[k] = -scale * w * w;
  }
  m.values[0] = 0.0;
  return m;
}

Multiplier inverse_second_derivative_scaled(const TimeGrid& grid, double scale) {
  Multiplier m = Multiplier::identity(grid);
  m.values[0] = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double w = grid.omega(k);
    m.values[k] = -scale / (w * w);
  }
  return m;
}

void require_kerr(const KerrCoupling& coupling, const char* what) {
  if (!std::isfinite(coupling.alpha) || !(coupling.alpha > 0.0) || !(coupling.beta > 0.0)) {
    throw InvalidParameter(std::string(what) + ": chi3 must be positive for the dimensionless scales to exist");
  }
}

}  // namespace

DirectedPair to_dimensionless(const DirectedPair& dp, const KerrCoupling& coupling) {
  require_kerr(coupling, "to_dimensionless");
  const auto m = second_derivative_scaled(dp.grid(), 1.0 / coupling.alpha);
  return {apply(m, dp.pi), apply(m, dp.lambda)};
}

PropagationRecord to_dimensionless(const PropagationRecord& record, const KerrCoupling& coupling) {
  require_kerr(coupling, "to_dimensionless");
  PropagationRecord out;
  out.meta = record.meta;
  out.meta.model = "dimensionless:" + record.meta.model;
  for (std::size_t i = 0; i < record.states.size(); ++i) {
    out.stations.push_back(record.stations[i] / coupling.beta);
    out.states.push_back(to_dimensionless(record.states[i], coupling));
  }
  return out;
}

PropagationRecord from_dimensionless(const PropagationRecord& record, const KerrCoupling& coupling) {
  require_kerr(coupling, "from_dimensionless");
  PropagationRecord out;
  out.meta = record.meta;
  const std::string prefix = "dimensionless:";
  if (out.meta.model.rfind(prefix, 0) == 0) out.meta.model = out.meta.model.substr(prefix.size());
  for (std::size_t i = 0; i < record.states.size(); ++i) {
    const auto& s = record.states[i];
    const auto m = inverse_second_derivative_scaled(s.grid(), coupling.alpha);
    out.stations.push_back(record.stations[i] * coupling.beta);
    out.states.push_back({apply(m, s.pi), apply(m, s.lambda)});
  }
  return out;
}

}  // namespace metapulse
