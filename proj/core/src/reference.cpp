#include "metapulse/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "metapulse/errors.hpp"

namespace metapulse {

YeeMedium YeeMedium::from(const DrudeParams& params) {
  params.validate();
  return {params.c, params.eps0, params.mu0, params.omega_pe, params.omega_pm};
}

YeeMedium YeeMedium::vacuum(double c, double eps0, double mu0) { return {c, eps0, mu0, 0.0, 0.0}; }

void YeeGrid1D::validate(const YeeMedium& medium) const {
  std::ostringstream msg;
  if (nx < 64) msg << "nx = " << nx << " < 64; ";
  if (!(dx > 0.0) || !(dt_fdtd > 0.0)) msg << "dx and dt must be positive; ";
  if (msg.str().empty()) {
    const double cr = courant(medium);
    if (cr > 0.99) msg << "courant = " << cr << " > 0.99; ";
    const double plasma = (medium.omega_pe * medium.omega_pe + medium.omega_pm * medium.omega_pm) *
                          dt_fdtd * dt_fdtd / 4.0;
    if (cr * cr + plasma >= 1.0) msg << "leapfrog bound violated (courant^2 + plasma term = " << cr * cr + plasma << "); ";
  }
  if (!msg.str().empty()) throw InvalidParameter("YeeGrid1D: " + msg.str());
}

std::size_t YeeGrid1D::node_index(double x) const {
  const double pos = (x - x_min) / dx;
  const double idx = std::round(pos);
  if (idx < 0.0 || idx > static_cast<double>(nx) || std::abs(pos - idx) > 1e-6) {
    std::ostringstream msg;
    msg << "x = " << x << " is not a node of the grid [" << x_min << ", " << node(nx) << "] with dx = " << dx;
    throw InvalidParameter(msg.str());
  }
  return static_cast<std::size_t>(idx);
}

MaxwellState MaxwellState::zeros(const YeeGrid1D& grid) {
  MaxwellState s;
  s.e.assign(grid.nx + 1, 0.0);
  s.j_e.assign(grid.nx + 1, 0.0);
  s.h.assign(grid.nx, 0.0);
  s.b.assign(grid.nx, 0.0);
  s.j_m.assign(grid.nx, 0.0);
  return s;
}

void update_drude_current(std::span<double> current, std::span<const double> field, double coefficient) {
  if (coefficient == 0.0) return;
  for (std::size_t i = 0; i < current.size(); ++i) current[i] += coefficient * field[i];
}

void advance(MaxwellState& s, const YeeGrid1D& grid, const YeeMedium& medium) {
  const std::size_t nx = grid.nx;
  const double dt = grid.dt_fdtd;
  const double inv_dx = 1.0 / grid.dx;
  const double h_gain = dt / medium.mu0;
  const double e_gain = dt / medium.eps0;

  // J_m^{n} from J_m^{n-1} and H^{n-1/2}.
  update_drude_current(s.j_m, s.h, dt * medium.mu0 * medium.omega_pm * medium.omega_pm);
  for (std::size_t i = 0; i < nx; ++i) {
    const double curl = (s.e[i + 1] - s.e[i]) * inv_dx;
    s.h[i] += h_gain * (-curl - s.j_m[i]);
    s.b[i] -= dt * curl;
  }
  // J_e^{n+1/2} from J_e^{n-1/2} and E^n; walls stay zero.
  update_drude_current(std::span<double>(s.j_e).subspan(1, nx - 1), std::span<const double>(s.e).subspan(1, nx - 1),
                       dt * medium.eps0 * medium.omega_pe * medium.omega_pe);
  for (std::size_t i = 1; i < nx; ++i) {
    s.e[i] += e_gain * (-(s.h[i] - s.h[i - 1]) * inv_dx - s.j_e[i]);
  }
  ++s.step;
}

MaxwellState step(MaxwellState state, const YeeGrid1D& grid, const YeeMedium& medium) {
  advance(state, grid, medium);
  return state;
}

double yee_energy(std::span<const double> e, std::span<const double> h_old, std::span<const double> h_new,
                  const YeeGrid1D& grid, const YeeMedium& medium) {
  double w = 0.0;
  for (double v : e) w += medium.eps0 * v * v;
  for (std::size_t i = 0; i < h_old.size(); ++i) w += medium.mu0 * h_old[i] * h_new[i];
  return 0.5 * w * grid.dx;
}

ReferenceLayout plan_layout(const TimeGrid& record_grid, const YeeMedium& medium, double dx, double courant,
                            double duration, std::span<const double> probes, double pad_speed, double source_x) {
  if (!(dx > 0.0)) throw InvalidParameter("plan_layout: dx must be positive");
  if (!(courant > 0.0) || courant > 0.99) throw InvalidParameter("plan_layout: courant must lie in (0, 0.99]");
  if (!(duration > 0.0) || duration > record_grid.window() * (1.0 + 1e-12)) {
    throw InvalidParameter("plan_layout: duration must lie in (0, window]");
  }
  if (probes.empty()) throw InvalidParameter("plan_layout: at least one probe is required");
  ReferenceLayout layout;
  const double dt_max = courant * dx / medium.c;
  std::size_t m = 1;
  while (record_grid.dt() / static_cast<double>(m) > dt_max * (1.0 + 1e-12)) m *= 2;
  layout.substeps = m;
  layout.grid.dx = dx;
  layout.grid.dt_fdtd = record_grid.dt() / static_cast<double>(m);

  const double far = *std::max_element(probes.begin(), probes.end());
  const double near = std::min(*std::min_element(probes.begin(), probes.end()), source_x);
  const auto pad_cells = static_cast<std::size_t>(std::ceil(pad_speed * duration / 2.0 / dx));
  const auto left_cells = pad_cells + static_cast<std::size_t>(std::ceil((source_x - near) / dx - 1e-9));
  const auto span_cells = static_cast<std::size_t>(std::ceil((far - source_x) / dx - 1e-9));
  layout.grid.x_min = source_x - static_cast<double>(left_cells) * dx;
  layout.grid.nx = std::max<std::size_t>(left_cells + span_cells + pad_cells, 64);
  layout.source_node = left_cells;
  layout.grid.validate(medium);
  return layout;
}

ProbeRecord run_boundary_source(const Signal& source, const ReferenceLayout& layout, const YeeMedium& medium,
                                double duration, std::span<const double> probes, double contamination_tol) {
  const auto& grid = layout.grid;
  grid.validate(medium);
  const TimeGrid& tgrid = source.grid();
  if (!(duration > 0.0) || duration > tgrid.window() * (1.0 + 1e-12)) {
    throw InvalidParameter("run_boundary_source: duration must lie in (0, window]");
  }
  const std::size_t m = layout.substeps;
  const std::size_t samples = std::min(tgrid.size(), static_cast<std::size_t>(std::floor(duration / tgrid.dt() + 1e-9)));
  const std::size_t total_steps = samples * m;

  std::vector<std::size_t> idx;
  for (double x : probes) {
    const std::size_t i = grid.node_index(x);
    if (i == 0 || i == grid.nx) throw InvalidParameter("run_boundary_source: probe on a wall");
    idx.push_back(i);
  }
  const std::size_t src = layout.source_node;
  if (src == 0 || src >= grid.nx) throw InvalidParameter("run_boundary_source: source on a wall");

  const std::vector<double> drive = upsample(source, m);
  const double source_peak = source.peak();

  ProbeRecord rec;
  rec.layout = layout;
  rec.x.assign(probes.begin(), probes.end());
  std::vector<std::vector<double>> e_rec(idx.size(), std::vector<double>(tgrid.size(), 0.0));
  std::vector<std::vector<double>> b_rec(idx.size(), std::vector<double>(tgrid.size(), 0.0));

  MaxwellState s = MaxwellState::zeros(grid);
  s.e[src] += drive[0];
  std::vector<double> b_prev(2 * idx.size(), 0.0);
  const double blowup = 1e6 * std::max(source_peak, std::numeric_limits<double>::min());

  for (std::size_t n = 0; n < total_steps; ++n) {
    const bool record = n % m == 0;
    const std::size_t j = n / m;
    if (record) {
      for (std::size_t p = 0; p < idx.size(); ++p) {
        e_rec[p][j] = s.e[idx[p]];
        b_prev[2 * p] = s.b[idx[p] - 1];
        b_prev[2 * p + 1] = s.b[idx[p]];
      }
    }
    advance(s, grid, medium);
    if (n + 1 < drive.size()) s.e[src] += drive[n + 1];
    if (record) {
      for (std::size_t p = 0; p < idx.size(); ++p) {
        b_rec[p][j] = 0.25 * (b_prev[2 * p] + b_prev[2 * p + 1] + s.b[idx[p] - 1] + s.b[idx[p]]);
      }
      rec.source_peak = std::max(rec.source_peak, std::abs(s.e[src]));
      rec.wall_peak = std::max({rec.wall_peak, std::abs(s.e[1]), std::abs(s.e[grid.nx - 1])});
      if (j % 64 == 0) {
        double emax = 0.0;
        for (double v : s.e) emax = std::max(emax, std::abs(v));
        if (!std::isfinite(emax) || emax > blowup) {
          std::ostringstream msg;
          msg << "run_boundary_source: instability at step " << n << " (max |E| = " << emax << ")";
          throw NumericalFailure(msg.str());
        }
      }
    }
  }
  rec.contaminated = rec.wall_peak > contamination_tol * rec.source_peak;
  for (std::size_t p = 0; p < idx.size(); ++p) {
    rec.fields.push_back({Signal(tgrid, std::move(b_rec[p])), Signal(tgrid, std::move(e_rec[p]))});
  }
  return rec;
}

double relative_l2(const Signal& x, const Signal& y) {
  if (!(x.grid() == y.grid())) throw InadmissibleGrid("relative_l2: grid mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - y[i]) * (x[i] - y[i]);
    den += y[i] * y[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace metapulse
