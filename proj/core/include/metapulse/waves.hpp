#pragma once

// Boundary fields (E, B at x = 0) <-> directed-wave amplitudes.
//
//   Pi     = 1/2 (B + a E)   right wave
//   Lambda = 1/2 (B - a E)   left wave
//
// Both carry the units of B: a has units s/m, so a E is flux-density-like.

#include "metapulse/projectors.hpp"
#include "metapulse/spectral.hpp"

namespace metapulse {

struct DirectedPair {
  Signal pi;
  Signal lambda;

  const TimeGrid& grid() const { return pi.grid(); }
};

/// E(0, t) = j(t), B(0, t) = k(t).
struct BoundaryRegime {
  Signal j;
  Signal k;

  /// Zero-mean and edge-decayed to within `tolerance` of peak.
  bool well_posed(double tolerance = 1e-8) const;
};

/// Lambda = (k - a j)/2, Pi = (k + a j)/2. DC content in the regime is
/// reported as a warning (it is annihilated by a).
DirectedPair split(const BoundaryRegime& regime, const DrudeParams& params, const TimeGrid& grid,
                   double tol_a = kDefaultTolA);

/// B = Pi + Lambda, E = a^-1 (Pi - Lambda). Requires a grid admissible for a^-1.
FieldPair reconstruct(const DirectedPair& dp, const DrudeParams& params, const TimeGrid& grid,
                      double tol_a = kDefaultTolA);

}  // namespace metapulse
