#pragma once

// Projectors splitting the (B, E) evolution operator into its two eigenspaces.
//
//   P1 = 1/2 [[1, -a], [-a^-1, 1]]    P2 = 1/2 [[1, +a], [+a^-1, 1]]
//
// with a the slowness operator. Per frequency bin, P1 projects onto the
// eigenvector of L(w) = [[0, -i w a^2], [-i w, 0]] with eigenvalue +i w a(w)
// and P2 onto the one with eigenvalue -i w a(w). The algebra holds on the
// subspace without DC and Nyquist content, where a and a^-1 are inverses.

#include <array>
#include <cstdint>

#include "metapulse/spectral.hpp"

namespace metapulse {

/// Psi = (B, E): magnetic flux density and electric field at one station.
struct FieldPair {
  Signal b;
  Signal e;

  const TimeGrid& grid() const { return b.grid(); }
};

FieldPair operator+(const FieldPair& x, const FieldPair& y);
FieldPair operator-(const FieldPair& x, const FieldPair& y);
FieldPair operator*(double s, const FieldPair& x);

enum class Projector { first = 1, second = 2 };

class ProjectorPair {
 public:
  ProjectorPair(Multiplier a, Multiplier a_inv);

  const TimeGrid& grid() const { return a_.grid; }
  const Multiplier& a() const { return a_; }
  const Multiplier& a_inv() const { return a_inv_; }

  FieldPair apply(Projector which, const FieldPair& psi) const;

 private:
  Multiplier a_;
  Multiplier a_inv_;
};

ProjectorPair build_projectors(const DrudeParams& params, const TimeGrid& grid,
                               double tol_a = kDefaultTolA);

/// (1/2 B -+ 1/2 a E, -+ 1/2 a^-1 B + 1/2 E), upper sign for Projector::first.
FieldPair apply_projector(const ProjectorPair& pair, Projector which, const FieldPair& psi);

/// Residual of a field comparison: max over components of
/// max|x_c - y_c| / max|ref_c|. Components carry different units, so each is
/// scaled by its own reference peak.
double field_residual(const FieldPair& x, const FieldPair& y, const FieldPair& ref);

/// L Psi = (-d_t a^2 E, -d_t B), the x-evolution operator.
FieldPair apply_evolution_operator(const DrudeParams& params, const FieldPair& psi);

/// max over `samples` random zero-mean fields of the residual of P L - L P
/// for both projectors.
double commutation_check(const ProjectorPair& pair, const DrudeParams& params, const TimeGrid& grid,
                         std::size_t samples = 50, std::uint64_t seed = 20240611);

using Matrix2 = std::array<std::array<Complex, 2>, 2>;

Matrix2 projector_symbol(Projector which, double a);
Matrix2 evolution_symbol(double omega, double a);
Matrix2 operator*(const Matrix2& x, const Matrix2& y);
Matrix2 operator+(const Matrix2& x, const Matrix2& y);
Matrix2 operator-(const Matrix2& x, const Matrix2& y);
double max_abs(const Matrix2& m);

}  // namespace metapulse
