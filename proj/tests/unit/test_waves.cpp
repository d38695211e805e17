#include <catch_amalgamated.hpp>

#include <random>

#include "metapulse/waves.hpp"
#include "random_fields.hpp"

using namespace metapulse;
using namespace metapulse::testing;
using Catch::Matchers::WithinRel;

namespace {

const DrudeParams kParams = DrudeParams::normalized(1.0, 1.0);
const TimeGrid kGrid(1024, 0.37);

}  // namespace

TEST_CASE("split definitions") {
  std::mt19937_64 rng(21);
  const Signal k = random_zero_mean(kGrid, rng);
  const auto only_k = split({Signal(kGrid), k}, kParams, kGrid);
  CHECK(max_abs_diff(only_k.pi, 0.5 * k) <= 1e-15 * k.peak());
  CHECK(max_abs_diff(only_k.lambda, 0.5 * k) <= 1e-15 * k.peak());

  const Signal j = random_zero_mean(kGrid, rng);
  const Signal aj = apply(make_multiplier(MultiplierKind::a, kParams, kGrid), j);
  const auto right = split({j, aj}, kParams, kGrid);
  CHECK(right.lambda.peak() <= 1e-12 * aj.peak());
  CHECK(rel_peak_diff(right.pi, aj) <= 1e-12);
}

TEST_CASE("split is linear") {
  std::mt19937_64 rng(22);
  const BoundaryRegime r1{random_zero_mean(kGrid, rng), random_zero_mean(kGrid, rng)};
  const BoundaryRegime r2{random_zero_mean(kGrid, rng), random_zero_mean(kGrid, rng)};
  const BoundaryRegime mix{2.0 * r1.j + (-3.0) * r2.j, 2.0 * r1.k + (-3.0) * r2.k};
  const auto a = split(r1, kParams, kGrid);
  const auto b = split(r2, kParams, kGrid);
  const auto m = split(mix, kParams, kGrid);
  CHECK(rel_peak_diff(m.pi, 2.0 * a.pi + (-3.0) * b.pi) <= 1e-12);
  CHECK(rel_peak_diff(m.lambda, 2.0 * a.lambda + (-3.0) * b.lambda) <= 1e-12);
}

TEST_CASE("reconstruct special cases") {
  std::mt19937_64 rng(23);
  const Signal pi = random_zero_mean(kGrid, rng);
  const auto opposite = reconstruct({pi, -pi}, kParams, kGrid);
  CHECK(opposite.b.peak() == 0.0);
  const Signal want = 2.0 * apply(make_multiplier(MultiplierKind::a_inv, kParams, kGrid), pi);
  CHECK(rel_peak_diff(opposite.e, want) <= 1e-12);
  const auto equal = reconstruct({pi, pi}, kParams, kGrid);
  CHECK(equal.e.peak() == 0.0);
}

TEST_CASE("split and reconstruct are inverse on zero-mean data") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 10; ++i) {
    const BoundaryRegime r{random_zero_mean(kGrid, rng), random_zero_mean(kGrid, rng)};
    const FieldPair back = reconstruct(split(r, kParams, kGrid), kParams, kGrid);
    const FieldPair orig{r.k, r.j};
    CHECK(field_residual(back, orig, orig) <= 1e-9);

    const DirectedPair dp{random_zero_mean(kGrid, rng), random_zero_mean(kGrid, rng)};
    const FieldPair f = reconstruct(dp, kParams, kGrid);
    const auto again = split({f.e, f.b}, kParams, kGrid);
    CHECK(rel_peak_diff(again.pi, dp.pi) <= 1e-9);
    CHECK(rel_peak_diff(again.lambda, dp.lambda) <= 1e-9);
  }
}

TEST_CASE("directed-wave norm bookkeeping") {
  std::mt19937_64 rng(25);
  const BoundaryRegime r{random_zero_mean(kGrid, rng), random_zero_mean(kGrid, rng)};
  const auto dp = split(r, kParams, kGrid);
  const Signal aj = apply(make_multiplier(MultiplierKind::a, kParams, kGrid), r.j);
  const double lhs = dp.pi.l2() * dp.pi.l2() + dp.lambda.l2() * dp.lambda.l2();
  const double rhs = 0.5 * (r.k.l2() * r.k.l2() + aj.l2() * aj.l2());
  CHECK_THAT(lhs, WithinRel(rhs, 1e-9));
}

TEST_CASE("boundary regime well-posedness") {
  std::mt19937_64 rng(26);
  const BoundaryRegime good{wave_packet(kGrid, 0.5, 20.0), wave_packet(kGrid, 0.5, 20.0)};
  CHECK(good.well_posed());
  std::vector<double> v(kGrid.size(), 1.0);
  const BoundaryRegime bad{Signal(kGrid, v), good.k};
  CHECK_FALSE(bad.well_posed());
  // DC content only warns; the DC bin is annihilated.
  const auto dp = split(bad, kParams, kGrid);
  CHECK(std::abs(dp.pi.mean()) < 1e-12);
}
