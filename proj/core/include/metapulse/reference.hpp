#pragma once

// Independent time-domain oracle: 1D Yee leapfrog for
//   eps0 d_t E = -d_x H - J_e,   d_t J_e = eps0 omega_pe^2 E
//   mu0  d_t H = -d_x E - J_m,   d_t J_m = mu0  omega_pm^2 H
//   d_t B = -d_x E
// The auxiliary currents reproduce eps(w) = 1 - omega_pe^2/w^2 and
// mu(w) = 1 - omega_pm^2/w^2 without touching the spectral machinery.
//
// E, J_e live on nodes x_i = x_min + i dx (i = 0..nx) at integer time levels;
// H, B, J_m live on x_{i+1/2} with H, B at half-integer and J_m at integer
// levels. Both walls are perfect conductors (E = 0); the domain is padded so
// that reflections do not reach the probes within the run.

#include <cstddef>
#include <span>
#include <vector>

#include "metapulse/projectors.hpp"
#include "metapulse/spectral.hpp"

namespace metapulse {

struct YeeMedium {
  double c = 1.0;
  double eps0 = 1.0;
  double mu0 = 1.0;
  double omega_pe = 0.0;  ///< zero allowed: vacuum response
  double omega_pm = 0.0;

  static YeeMedium from(const DrudeParams& params);
  static YeeMedium vacuum(double c = 1.0, double eps0 = 1.0, double mu0 = 1.0);
};

struct YeeGrid1D {
  std::size_t nx = 0;  ///< cell count; nx + 1 E nodes
  double dx = 0.0;
  double dt_fdtd = 0.0;
  double x_min = 0.0;

  double courant(const YeeMedium& medium) const { return medium.c * dt_fdtd / dx; }
  double node(std::size_t i) const { return x_min + static_cast<double>(i) * dx; }
  /// Throws InvalidParameter unless nx >= 64, courant <= 0.99 and the Drude
  /// leapfrog bound courant^2 + (omega_pe^2 + omega_pm^2) dt^2 / 4 < 1 holds.
  void validate(const YeeMedium& medium) const;
  /// Index of the node at x; throws InvalidParameter if x is outside the grid
  /// or more than 1e-6 cells away from a node.
  std::size_t node_index(double x) const;
};

struct MaxwellState {
  std::vector<double> e;    ///< nx + 1
  std::vector<double> h;    ///< nx
  std::vector<double> b;    ///< nx
  std::vector<double> j_e;  ///< nx + 1
  std::vector<double> j_m;  ///< nx
  std::size_t step = 0;

  static MaxwellState zeros(const YeeGrid1D& grid);
};

/// current += coefficient * field (leapfrog update of an auxiliary current).
void update_drude_current(std::span<double> current, std::span<const double> field, double coefficient);

/// One leapfrog update in place (no source).
void advance(MaxwellState& state, const YeeGrid1D& grid, const YeeMedium& medium);
/// Value-semantics wrapper around advance().
MaxwellState step(MaxwellState state, const YeeGrid1D& grid, const YeeMedium& medium);

/// Vacuum Yee energy sum(eps0 E^2 + mu0 H_old H_new) dx / 2, conserved exactly
/// between PEC walls when no source or current acts.
double yee_energy(std::span<const double> e, std::span<const double> h_old, std::span<const double> h_new,
                  const YeeGrid1D& grid, const YeeMedium& medium);

struct ReferenceLayout {
  YeeGrid1D grid;
  std::size_t substeps = 1;  ///< FDTD steps per recorded sample (power of two)
  std::size_t source_node = 0;
};

/// Plans a padded grid for a run recorded on `record_grid`: dt_fdtd =
/// record_grid.dt() / substeps with the smallest power-of-two substeps such that
/// courant <= `courant`. The domain spans [source_x - pad, max(probe) + pad],
/// pad = pad_speed * duration / 2 rounded up to whole cells.
ReferenceLayout plan_layout(const TimeGrid& record_grid, const YeeMedium& medium, double dx, double courant,
                            double duration, std::span<const double> probes, double pad_speed,
                            double source_x = 0.0);

struct ProbeRecord {
  std::vector<double> x;
  std::vector<FieldPair> fields;  ///< (B, E) at each probe on the source's time grid
  double source_peak = 0.0;       ///< max |E| at the source node
  double wall_peak = 0.0;         ///< max |E| next to either wall
  bool contaminated = false;      ///< wall_peak > contamination_tol * source_peak
  ReferenceLayout layout;
};

/// Soft source: E at the source node receives source(t) after every update.
/// The source is band-limited-interpolated onto the FDTD step. E is recorded
/// at integer levels; B is averaged over the two adjacent staggered nodes and
/// the two adjacent half levels. Throws NumericalFailure when |E| exceeds
/// 1e6 times the source peak.
ProbeRecord run_boundary_source(const Signal& source, const ReferenceLayout& layout, const YeeMedium& medium,
                                double duration, std::span<const double> probes, double contamination_tol = 1e-6);

/// Relative L2 distance ||x - y|| / ||y||.
double relative_l2(const Signal& x, const Signal& y);

}  // namespace metapulse
