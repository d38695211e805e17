#include "metapulse/projectors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "metapulse/errors.hpp"

namespace metapulse {

FieldPair operator+(const FieldPair& x, const FieldPair& y) { return {x.b + y.b, x.e + y.e}; }
FieldPair operator-(const FieldPair& x, const FieldPair& y) { return {x.b - y.b, x.e - y.e}; }
FieldPair operator*(double s, const FieldPair& x) { return {s * x.b, s * x.e}; }

ProjectorPair::ProjectorPair(Multiplier a, Multiplier a_inv) : a_(std::move(a)), a_inv_(std::move(a_inv)) {
  if (!(a_.grid == a_inv_.grid)) throw InadmissibleGrid("ProjectorPair: a and a^-1 on different grids");
}

FieldPair ProjectorPair::apply(Projector which, const FieldPair& psi) const {
  if (!(psi.b.grid() == grid()) || !(psi.e.grid() == grid())) {
    throw InadmissibleGrid("apply_projector: field grid does not match projector grid");
  }
  const double sign = which == Projector::first ? -1.0 : 1.0;
  const auto bs = to_spectrum(psi.b);
  const auto es = to_spectrum(psi.e);
  Spectrum out_b{grid(), std::vector<Complex>(bs.bins.size())};
  Spectrum out_e{grid(), std::vector<Complex>(bs.bins.size())};
  for (std::size_t k = 0; k < bs.bins.size(); ++k) {
    out_b.bins[k] = 0.5 * bs.bins[k] + 0.5 * sign * a_.values[k] * es.bins[k];
    out_e.bins[k] = 0.5 * sign * a_inv_.values[k] * bs.bins[k] + 0.5 * es.bins[k];
  }
  double a_max = 0.0;
  double a_inv_max = 0.0;
  for (std::size_t k = 0; k < bs.bins.size(); ++k) {
    a_max = std::max(a_max, std::abs(a_.values[k]));
    a_inv_max = std::max(a_inv_max, std::abs(a_inv_.values[k]));
  }
  const double b_peak = psi.b.peak();
  const double e_peak = psi.e.peak();
  return {from_spectrum_checked(out_b, 1e-10, b_peak + a_max * e_peak),
          from_spectrum_checked(out_e, 1e-10, a_inv_max * b_peak + e_peak)};
}

ProjectorPair build_projectors(const DrudeParams& params, const TimeGrid& grid, double tol_a) {
  return ProjectorPair(make_multiplier(MultiplierKind::a, params, grid, tol_a),
                       make_multiplier(MultiplierKind::a_inv, params, grid, tol_a));
}

FieldPair apply_projector(const ProjectorPair& pair, Projector which, const FieldPair& psi) {
  return pair.apply(which, psi);
}

double field_residual(const FieldPair& x, const FieldPair& y, const FieldPair& ref) {
  auto component = [](const Signal& u, const Signal& v, const Signal& r) {
    double diff = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) diff = std::max(diff, std::abs(u[i] - v[i]));
    const double scale = r.peak();
    return scale > 0.0 ? diff / scale : diff;
  };
  return std::max(component(x.b, y.b, ref.b), component(x.e, y.e, ref.e));
}

FieldPair apply_evolution_operator(const DrudeParams& params, const FieldPair& psi) {
  const auto& grid = psi.grid();
  const auto d_dt = make_multiplier(MultiplierKind::d_dt, params, grid);
  const auto a_sq = make_multiplier(MultiplierKind::a_sq, params, grid);
  return {-apply(d_dt * a_sq, psi.e), -apply(d_dt, psi.b)};
}

double commutation_check(const ProjectorPair& pair, const DrudeParams& params, const TimeGrid& grid,
                         std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto random_signal = [&] {
    std::vector<double> v(grid.size());
    for (double& x : v) x = normal(rng);
    return remove_mean_and_nyquist(Signal(grid, std::move(v)));
  };
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const FieldPair psi{random_signal(), random_signal()};
    for (auto which : {Projector::first, Projector::second}) {
      const auto pl = pair.apply(which, apply_evolution_operator(params, psi));
      const auto lp = apply_evolution_operator(params, pair.apply(which, psi));
      worst = std::max(worst, field_residual(pl, lp, lp));
    }
  }
  return worst;
}

Matrix2 projector_symbol(Projector which, double a) {
  const double s = which == Projector::first ? -1.0 : 1.0;
  return {{{Complex{0.5}, Complex{0.5 * s * a}}, {Complex{0.5 * s / a}, Complex{0.5}}}};
}

Matrix2 evolution_symbol(double omega, double a) {
  return {{{Complex{}, Complex{0.0, -omega * a * a}}, {Complex{0.0, -omega}, Complex{}}}};
}

Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
  Matrix2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
  return r;
}

Matrix2 operator+(const Matrix2& x, const Matrix2& y) {
  Matrix2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = x[i][j] + y[i][j];
  return r;
}

Matrix2 operator-(const Matrix2& x, const Matrix2& y) {
  Matrix2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = x[i][j] - y[i][j];
  return r;
}

double max_abs(const Matrix2& m) {
  double r = 0.0;
  for (const auto& row : m)
    for (const auto& v : row) r = std::max(r, std::abs(v));
  return r;
}

}  // namespace metapulse
