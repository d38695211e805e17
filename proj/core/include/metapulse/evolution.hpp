#pragma once

// Propagation of directed waves along x from a boundary regime at x = 0.
//
// Linear, exact:      d_x Pi = -a d_t Pi,                  d_x Lambda = +a d_t Lambda
// Klein-Gordon:       d_x Pi = -(pq/c) d_t^-1 Pi,          d_x Lambda = +(pq/c) d_t^-1 Lambda
// Kerr-coupled:       d_x Pi = -(pq/c) d_t^-1 Pi - S,      d_x Lambda = +(pq/c) d_t^-1 Lambda + S
//   with S = (1/c) (chi3/2) mu0 q^2 d_t^-1 e^3 and e = (c/pq) (Pi - Lambda)_tt, i.e.
//   S = (K/c) d_t^-1 [(Pi - Lambda)_tt]^3, K = mu0 chi3 c^3 / (2 p^3 q).

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "metapulse/waves.hpp"

namespace metapulse {

enum class MuModel {
  dominant,  ///< mu ~ -mu0 q^2 d_t^-2 inside the Kerr source
  full,      ///< mu = mu0 (1 - q^2 d_t^-2)
};

std::string to_string(MuModel model);

struct RecordMeta {
  std::string model;
  DrudeParams params;
  std::size_t n = 0;
  double dt = 0.0;
  std::size_t steps = 0;
  bool dealias = false;
  MuModel mu_model = MuModel::dominant;
};

/// Directed-wave snapshots along x. stations[0] == 0 and stations increase.
struct PropagationRecord {
  std::vector<double> stations;
  std::vector<DirectedPair> states;
  RecordMeta meta;
};

/// Raised when the nonlinear march produces a non-finite state. Carries the
/// record up to the last finite station.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, PropagationRecord partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const PropagationRecord& partial() const { return partial_; }

 private:
  PropagationRecord partial_;
};

/// Scales of the Kerr-coupled system:
///   big_k = mu0 chi3 c^3 / (2 p^3 q),
///   alpha = sqrt(2 p^4 q^2 / (mu0 chi3 c^3))   (amplitude of Pi_tt),
///   beta  = c / (p q)                          (length).
/// With chi3 = 0, alpha is +infinity.
struct KerrCoupling {
  double big_k = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

KerrCoupling kerr_coupling(const DrudeParams& params);

/// Smallest step count with dx <= beta / 50 (at least 4).
std::size_t default_step_count(double x_end, const DrudeParams& params);

/// Exact per-bin solution: Pi(x, w) = Pi(0, w) exp(-i w a(w) x), Lambda with the
/// opposite phase. DC and Nyquist bins are annihilated.
DirectedPair propagate_linear_exact(const DirectedPair& dp0, double x, const DrudeParams& params,
                                    const TimeGrid& grid, double tol_a = kDefaultTolA);

/// Exact per-bin solution of the Klein-Gordon pair:
/// Pi(x, w) = Pi(0, w) exp(+i p q x / (c w)), Lambda with the opposite phase.
DirectedPair propagate_kg(const DirectedPair& dp0, double x, const DrudeParams& params,
                          const TimeGrid& grid, double tol_a = kDefaultTolA);

/// Kerr source (chi3/2) mu0 q^2 d_t^-1 (e^3) (dominant model) or
/// (chi3/2) mu0 (q^2 d_t^-1 - d_t)(e^3) (full model). Magnetic nonlinearity is zero.
Signal build_nonlinearity(const Signal& e, const DrudeParams& params, MuModel model = MuModel::dominant);

/// Generic semilinear system marched in x:
///   d_x Pi     = -mass d_t^-1 Pi     - S
///   d_x Lambda = +mass d_t^-1 Lambda + S
///   S = source_map (e^3),  e = field_map (Pi - Lambda)
/// With `unidirectional`, Lambda is held at zero and e = field_map Pi.
struct KerrSystem {
  double mass = 0.0;
  Multiplier field_map;
  Multiplier source_map;
  bool dealias = true;
  bool unidirectional = false;
};

struct NonlinearOptions {
  bool dealias = true;
  MuModel mu_model = MuModel::dominant;
  std::size_t record_every = 1;  ///< record every k-th station (the last is always kept)
};

/// mass = pq/c, field_map = (c/pq) d_t^2, source_map = (1/c) times the Kerr source symbol.
KerrSystem physical_kerr_system(const DrudeParams& params, const TimeGrid& grid, const NonlinearOptions& options,
                                bool unidirectional = false);

/// mass = 1, field_map = 1, source_map = d_t:  pi_zt + pi = -[(pi - lambda)^3]_tt.
KerrSystem dimensionless_kerr_system(const TimeGrid& grid, const NonlinearOptions& options,
                                     bool unidirectional = false);

/// Integrating-factor fourth-order Runge-Kutta (Lawson) march: the linear
/// d_t^-1 terms are integrated exactly per bin, the Kerr source with the
/// classical four-stage tableau. Throws BlowUpError on a non-finite state.
PropagationRecord march(const KerrSystem& system, const DirectedPair& dp0, double x_end, std::size_t n_steps,
                        std::size_t record_every = 1);

/// Kerr-coupled directed waves. Requires chi3 >= 0, n_steps >= 4 and a grid
/// admissible for a and a^-1.
PropagationRecord propagate_nonlinear(const DirectedPair& dp0, double x_end, std::size_t n_steps,
                                      const DrudeParams& params, const TimeGrid& grid,
                                      const NonlinearOptions& options = {});

/// Right wave only (Lambda = 0).
PropagationRecord propagate_unidirectional(const Signal& pi0, double x_end, std::size_t n_steps,
                                           const DrudeParams& params, const TimeGrid& grid,
                                           const NonlinearOptions& options = {});

/// pi = Pi_tt / alpha, lambda = Lambda_tt / alpha, zeta = x / beta.
PropagationRecord to_dimensionless(const PropagationRecord& record, const KerrCoupling& coupling);
/// Pi = alpha d_t^-2 pi (DC annihilated), x = beta zeta.
PropagationRecord from_dimensionless(const PropagationRecord& record, const KerrCoupling& coupling);

/// Dimensionless initial data (pi, lambda) = (Pi_tt, Lambda_tt) / alpha.
DirectedPair to_dimensionless(const DirectedPair& dp, const KerrCoupling& coupling);

}  // namespace metapulse
