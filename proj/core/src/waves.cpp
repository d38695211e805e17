#include "metapulse/waves.hpp"

#include <spdlog/spdlog.h>

#include "metapulse/errors.hpp"

namespace metapulse {

bool BoundaryRegime::well_posed(double tolerance) const {
  return dc_fraction(j) <= tolerance && dc_fraction(k) <= tolerance && edge_fraction(j) <= tolerance &&
         edge_fraction(k) <= tolerance;
}

DirectedPair split(const BoundaryRegime& regime, const DrudeParams& params, const TimeGrid& grid,
                   double tol_a) {
  if (!(regime.j.grid() == grid) || !(regime.k.grid() == grid)) {
    throw InadmissibleGrid("split: boundary regime is not sampled on the requested grid");
  }
  if (dc_fraction(regime.j) > 1e-8 || dc_fraction(regime.k) > 1e-8) {
    spdlog::warn("split: boundary regime has DC content above 1e-8 of peak (j: {:.3e}, k: {:.3e}); "
                 "the slowness operator annihilates it",
                 dc_fraction(regime.j), dc_fraction(regime.k));
  }
  const auto a = make_multiplier(MultiplierKind::a, params, grid, tol_a);
  const Signal aj = apply(a, regime.j);
  return {0.5 * (regime.k + aj), 0.5 * (regime.k - aj)};
}

FieldPair reconstruct(const DirectedPair& dp, const DrudeParams& params, const TimeGrid& grid,
                      double tol_a) {
  if (!(dp.pi.grid() == grid) || !(dp.lambda.grid() == grid)) {
    throw InadmissibleGrid("reconstruct: directed pair is not sampled on the requested grid");
  }
  const auto a_inv = make_multiplier(MultiplierKind::a_inv, params, grid, tol_a);
  return {dp.pi + dp.lambda, apply(a_inv, dp.pi - dp.lambda)};
}

}  // namespace metapulse
