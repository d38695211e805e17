#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "metapulse/errors.hpp"
#include "metapulse/evolution.hpp"
#include "random_fields.hpp"

using namespace metapulse;
using namespace metapulse::testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const DrudeParams kLinear = DrudeParams::normalized(1.0, 1.0);
const TimeGrid kGrid(1024, 0.4);

DrudeParams kerr(double chi3) { return DrudeParams::normalized(1.0, 1.0, chi3); }

double pair_distance(const DirectedPair& a, const DirectedPair& b) {
  return std::hypot((a.pi - b.pi).l2(), (a.lambda - b.lambda).l2()) / std::hypot(b.pi.l2(), b.lambda.l2());
}

double pair_peak_diff(const DirectedPair& a, const DirectedPair& b) {
  const double ref = std::max(b.pi.peak(), b.lambda.peak());
  return std::max((a.pi - b.pi).peak(), (a.lambda - b.lambda).peak()) / ref;
}

Signal cosine(const TimeGrid& g, double w, double phase) {
  std::vector<double> v(g.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::cos(w * g.time(j) + phase);
  return Signal(g, std::move(v));
}

}  // namespace

TEST_CASE("exact linear propagation of a single bin") {
  const std::size_t k = 37;
  const double w = kGrid.omega(k);
  const double a = *a_symbol(kLinear, w);
  const DirectedPair dp{cosine(kGrid, w, 0.0), cosine(kGrid, w, 0.3)};
  for (double x : {0.0, 0.7, 5.0}) {
    const auto out = propagate_linear_exact(dp, x, kLinear, kGrid);
    // Pi gets e^{-i w a x}, Lambda the conjugate.
    CHECK(max_abs_diff(out.pi, cosine(kGrid, w, -w * a * x)) < 1e-12);
    CHECK(max_abs_diff(out.lambda, cosine(kGrid, w, 0.3 + w * a * x)) < 1e-12);
  }
}

TEST_CASE("exact linear propagation: identity, magnitude and additivity") {
  std::mt19937_64 rng(31);
  const DirectedPair dp{random_zero_mean(kGrid, rng), random_zero_mean(kGrid, rng)};
  const auto same = propagate_linear_exact(dp, 0.0, kLinear, kGrid);
  CHECK(pair_peak_diff(same, dp) <= 1e-15);

  const auto far = propagate_linear_exact(dp, 3.3, kLinear, kGrid);
  const auto s0 = to_spectrum(dp.pi);
  const auto s1 = to_spectrum(far.pi);
  double ref = 0.0;
  double worst = 0.0;
  for (std::size_t k = 0; k < kGrid.size(); ++k) {
    ref = std::max(ref, std::abs(s0.bins[k]));
    worst = std::max(worst, std::abs(std::abs(s1.bins[k]) - std::abs(s0.bins[k])));
  }
  CHECK(worst <= 1e-10 * ref);
  CHECK_THAT(far.pi.l2(), WithinRel(dp.pi.l2(), 1e-10));

  const auto chained = propagate_linear_exact(propagate_linear_exact(dp, 1.1, kLinear, kGrid), 2.2, kLinear, kGrid);
  CHECK(pair_peak_diff(chained, far) <= 1e-10);
  CHECK_THROWS_AS(propagate_linear_exact(dp, -1.0, kLinear, kGrid), InvalidParameter);
}

TEST_CASE("long-wave propagation of a single bin and additivity") {
  const std::size_t k = 5;
  const double w = kGrid.omega(k);
  const DirectedPair dp{cosine(kGrid, w, 0.0), cosine(kGrid, w, 0.0)};
  const double x = 0.013;
  const auto out = propagate_kg(dp, x, kLinear, kGrid);
  CHECK(max_abs_diff(out.pi, cosine(kGrid, w, x / w)) < 1e-12);
  CHECK(max_abs_diff(out.lambda, cosine(kGrid, w, -x / w)) < 1e-12);

  std::mt19937_64 rng(32);
  const DirectedPair r{random_zero_mean(kGrid, rng), random_zero_mean(kGrid, rng)};
  CHECK(pair_peak_diff(propagate_kg(r, 0.0, kLinear, kGrid), r) <= 1e-15);
  const auto one = propagate_kg(r, 0.5, kLinear, kGrid);
  const auto two = propagate_kg(propagate_kg(r, 0.2, kLinear, kGrid), 0.3, kLinear, kGrid);
  CHECK(pair_peak_diff(two, one) <= 1e-10);
}

TEST_CASE("long-wave against exact propagation within the truncation budget") {
  const TimeGrid g(4096, 1.0);
  const double edge = 0.1;
  DirectedPair dp{band_limit(wave_packet(g, 0.05, 200.0), 0.0, edge), Signal(g)};
  dp.lambda = 0.5 * dp.pi;
  const double budget_rate = taylor_truncation_error(kLinear, edge) * edge * std::abs(*a_symbol(kLinear, edge));
  for (double x : {0.05, 0.2, 1.0}) {
    const auto kg = propagate_kg(dp, x, kLinear, g);
    const auto ex = propagate_linear_exact(dp, x, kLinear, g);
    const double d = pair_distance(kg, ex);
    CHECK(d <= budget_rate * x);
    CHECK(d > 0.1 * budget_rate * x);  // the budget is not vacuous
  }
}

TEST_CASE("long-wave solution satisfies the second-order form") {
  const TimeGrid g(4096, 1.0);
  const DirectedPair dp{band_limit(wave_packet(g, 0.05, 200.0), 0.0, 0.1), Signal(g)};
  const auto ddt = make_multiplier(MultiplierKind::d_dt, kLinear, g);
  const double x = 0.4;
  const auto residual = [&](double h) {
    const Signal plus = propagate_kg(dp, x + h, kLinear, g).pi;
    const Signal minus = propagate_kg(dp, x - h, kLinear, g).pi;
    const Signal mid = propagate_kg(dp, x, kLinear, g).pi;
    const Signal dxt = apply(ddt, (1.0 / (2.0 * h)) * (plus - minus));
    return (dxt + mid).peak() / mid.peak();  // pq / c = 1
  };
  const double r1 = residual(1e-3);
  const double r2 = residual(5e-4);
  CHECK(r2 < 1e-4);
  CHECK_THAT(r1 / r2, WithinRel(4.0, 0.05));
}

TEST_CASE("Kerr source") {
  const auto p = kerr(0.8);
  std::mt19937_64 rng(33);
  const Signal e = random_zero_mean(kGrid, rng);
  CHECK(build_nonlinearity(Signal(kGrid), p).peak() == 0.0);
  CHECK(max_abs_diff(build_nonlinearity(-e, p), -build_nonlinearity(e, p)) == 0.0);

  // (chi3/2) mu0 q^2 d_t^-1 (e^3) assembled from separate multipliers.
  std::vector<double> cube(kGrid.size());
  for (std::size_t i = 0; i < cube.size(); ++i) cube[i] = e[i] * e[i] * e[i];
  const Signal want = 0.4 * apply(make_multiplier(MultiplierKind::d_dt_inv, p, kGrid), Signal(kGrid, cube));
  CHECK(rel_peak_diff(build_nonlinearity(e, p), want) <= 1e-12);

  // Full mu adds -(chi3/2) mu0 d_t (e^3).
  const Signal full_extra = -0.4 * apply(make_multiplier(MultiplierKind::d_dt, p, kGrid), Signal(kGrid, cube));
  CHECK(rel_peak_diff(build_nonlinearity(e, p, MuModel::full), want + full_extra) <= 1e-12);
}

TEST_CASE("Kerr source through the long-wave inverse slowness reproduces the coupled right-hand side") {
  // e = (c / pq) d_t^2 (Pi - Lambda); S / c should equal (K / c) d_t^-1 [(Pi - Lambda)_tt]^3.
  const auto p = DrudeParams::normalized(0.9, 1.3, 0.6);
  const TimeGrid g(1024, std::numbers::pi / 0.8);
  std::mt19937_64 rng(34);
  const Signal diff = random_zero_mean(g, rng) - random_zero_mean(g, rng);
  const auto ddt = make_multiplier(MultiplierKind::d_dt, p, g);
  const Signal tt = apply(ddt, apply(ddt, diff));
  const double pq = p.omega_pe * p.omega_pm;
  const Signal e = (p.c / pq) * tt;
  const Signal lhs = (1.0 / p.c) * build_nonlinearity(e, p);
  std::vector<double> cube(g.size());
  for (std::size_t i = 0; i < cube.size(); ++i) cube[i] = tt[i] * tt[i] * tt[i];
  const double big_k = kerr_coupling(p).big_k;
  const Signal rhs = (big_k / p.c) * apply(make_multiplier(MultiplierKind::d_dt_inv, p, g), Signal(g, cube));
  CHECK(rel_peak_diff(lhs, rhs) <= 1e-10);
}

TEST_CASE("coupling scales") {
  const auto p = DrudeParams::normalized(2.0, 2.0, 0.5);
  const auto k = kerr_coupling(p);
  CHECK_THAT(k.beta, WithinRel(1.0 / 4.0, 1e-15));
  CHECK_THAT(k.big_k, WithinRel(0.5 / (2.0 * 16.0), 1e-15));
  CHECK_THAT(k.alpha, WithinRel(std::sqrt(2.0 * 64.0 / 0.5), 1e-15));
  // K alpha^2 / (p q) = 1: the rescaled system has unit coefficients.
  CHECK_THAT(k.big_k * k.alpha * k.alpha / 4.0, WithinRel(1.0, 1e-14));
  CHECK_FALSE(std::isfinite(kerr_coupling(kLinear).alpha));
  CHECK(default_step_count(2.0, kLinear) == 100);
}

TEST_CASE("nonlinear march: zero fixed point and linear limit") {
  const DirectedPair zero{Signal(kGrid), Signal(kGrid)};
  const auto rec = propagate_nonlinear(zero, 1.0, 8, kerr(1.0), kGrid);
  for (const auto& s : rec.states) CHECK((s.pi.peak() == 0.0 && s.lambda.peak() == 0.0));

  std::mt19937_64 rng(35);
  const DirectedPair dp{wave_packet(kGrid, 0.3, 25.0, 5.0), wave_packet(kGrid, 0.25, 30.0, 2.0)};
  const auto lin = propagate_nonlinear(dp, 2.0, 16, kLinear, kGrid);
  CHECK(pair_peak_diff(lin.states.back(), propagate_kg(dp, 2.0, kLinear, kGrid)) <= 1e-12);
  const auto uni = propagate_unidirectional(dp.pi, 2.0, 16, kLinear, kGrid);
  CHECK(rel_peak_diff(uni.states.back().pi, propagate_kg(dp, 2.0, kLinear, kGrid).pi) <= 1e-12);
}

TEST_CASE("nonlinear march records stations and metadata") {
  const DirectedPair dp{wave_packet(kGrid, 0.3, 25.0, 5.0), Signal(kGrid)};
  NonlinearOptions opt;
  opt.record_every = 3;
  const auto rec = propagate_nonlinear(dp, 1.0, 10, kerr(1.0), kGrid, opt);
  REQUIRE(rec.stations.size() == rec.states.size());
  CHECK(rec.stations.front() == 0.0);
  CHECK_THAT(rec.stations.back(), WithinAbs(1.0, 1e-15));
  for (std::size_t i = 1; i < rec.stations.size(); ++i) CHECK(rec.stations[i] > rec.stations[i - 1]);
  CHECK(rec.stations.size() == 5);  // 0, 3, 6, 9 and the last
  CHECK(rec.meta.steps == 10);
  CHECK(rec.meta.dealias);
  CHECK(rec.meta.model == "kerr-coupled");
  CHECK_THROWS_AS(propagate_nonlinear(dp, 1.0, 3, kerr(1.0), kGrid), InvalidParameter);
}

TEST_CASE("nonlinear march converges at fourth order") {
  const auto p = kerr(1.0);
  const DirectedPair dp{wave_packet(kGrid, 0.3, 25.0, 10.0), Signal(kGrid)};
  std::vector<DirectedPair> runs;
  for (std::size_t n : {16u, 32u, 64u, 128u}) runs.push_back(propagate_nonlinear(dp, 2.0, n, p, kGrid).states.back());
  for (std::size_t i = 0; i + 2 < runs.size(); ++i) {
    const double order = std::log2(pair_distance(runs[i], runs[i + 1]) / pair_distance(runs[i + 1], runs[i + 2]));
    CHECK(order >= 3.7);
  }
}

TEST_CASE("nonlinear correction scales with the cube of the amplitude") {
  const auto p = kerr(1.0);
  const Signal base = wave_packet(kGrid, 0.3, 25.0, 10.0);
  std::vector<double> s;
  std::vector<double> corr;
  for (double scale : {1e-3, 2e-3, 5e-3, 1e-2}) {
    const DirectedPair dp{scale * base, Signal(kGrid)};
    const auto nl = propagate_unidirectional(dp.pi, 2.0, 32, p, kGrid).states.back();
    const auto lin = propagate_kg(dp, 2.0, kLinear, kGrid);
    s.push_back(scale);
    corr.push_back((nl.pi - lin.pi).l2());
  }
  CHECK_THAT(loglog_slope(s, corr), WithinAbs(3.0, 0.1));
}

TEST_CASE("symmetries of the coupled system") {
  const auto p = kerr(1.0);
  const DirectedPair dp{wave_packet(kGrid, 0.3, 25.0, 8.0), wave_packet(kGrid, 0.27, 20.0, 3.0)};
  const auto sys = physical_kerr_system(p, kGrid, {});
  const auto ref = march(sys, dp, 1.5, 24).states.back();

  // (Pi, Lambda) -> (-Pi, -Lambda) is exact: the source is odd.
  const auto neg = march(sys, {-dp.pi, -dp.lambda}, 1.5, 24).states.back();
  CHECK(pair_peak_diff(neg, {-ref.pi, -ref.lambda}) <= 1e-12);

  // (Pi, Lambda) -> (-Lambda, -Pi) holds once the sign of pq / c is flipped.
  auto flipped = sys;
  flipped.mass = -sys.mass;
  const auto swapped = march(flipped, {-dp.lambda, -dp.pi}, 1.5, 24).states.back();
  CHECK(pair_peak_diff(swapped, {-ref.lambda, -ref.pi}) <= 1e-12);
  // Without the flip the swap is not a symmetry.
  const auto unflipped = march(sys, {-dp.lambda, -dp.pi}, 1.5, 24).states.back();
  CHECK(pair_peak_diff(unflipped, {-ref.lambda, -ref.pi}) > 1e-3);
}

TEST_CASE("unidirectional run agrees with the coupled run while Lambda stays small") {
  const auto p = kerr(1e-3);
  const Signal pi0 = wave_packet(kGrid, 0.3, 25.0, 2.0);
  const auto coupled = propagate_nonlinear({pi0, Signal(kGrid)}, 1.0, 20, p, kGrid);
  const auto uni = propagate_unidirectional(pi0, 1.0, 20, p, kGrid);
  const auto& end = coupled.states.back();
  REQUIRE(end.lambda.peak() <= 1e-6 * end.pi.peak());
  CHECK(rel_peak_diff(uni.states.back().pi, end.pi) <= 1e-5);
  for (const auto& s : uni.states) CHECK(s.lambda.peak() == 0.0);
  CHECK(uni.meta.model == "kerr-unidirectional");
}

TEST_CASE("dealiasing keeps the top third of the spectrum empty") {
  const auto p = kerr(1.0);
  const DirectedPair dp{wave_packet(kGrid, 0.3, 25.0, 10.0), Signal(kGrid)};
  const auto rec = propagate_nonlinear(dp, 2.0, 32, p, kGrid);
  for (const auto& s : rec.states) {
    const auto spec = to_spectrum(s.pi);
    double total = 0.0;
    double top = 0.0;
    for (std::size_t k = 0; k < kGrid.size(); ++k) {
      total += std::norm(spec.bins[k]);
      if (kGrid.wavenumber_index(k) > kGrid.size() / 3) top += std::norm(spec.bins[k]);
    }
    CHECK(top <= 1e-24 * total);
  }
}

TEST_CASE("dimensionless rescaling") {
  const auto p = DrudeParams::normalized(1.0, 1.0, 0.5);
  const auto c = kerr_coupling(p);
  CHECK_THAT(c.beta, WithinRel(1.0, 1e-15));  // c / w_p^2 with w_p = 1
  std::mt19937_64 rng(36);
  const DirectedPair dp{random_zero_mean(kGrid, rng), random_zero_mean(kGrid, rng)};
  PropagationRecord rec{{0.0, 0.5}, {dp, dp}, {}};
  const auto back = from_dimensionless(to_dimensionless(rec, c), c);
  for (const auto& s : back.states) CHECK(pair_peak_diff(s, dp) <= 1e-9);
  CHECK_THAT(back.stations[1], WithinRel(0.5, 1e-15));
  CHECK_THROWS_AS(to_dimensionless(rec, kerr_coupling(kLinear)), InvalidParameter);
}

TEST_CASE("solve-then-rescale equals rescale-then-solve") {
  const auto p = DrudeParams::normalized(1.0, 1.0, 0.5);
  const auto c = kerr_coupling(p);
  const DirectedPair dp{wave_packet(kGrid, 0.3, 25.0, 8.0), wave_packet(kGrid, 0.25, 30.0, 2.0)};
  const std::size_t steps = 200;
  const auto physical = to_dimensionless(propagate_nonlinear(dp, 2.0, steps, p, kGrid), c);
  const auto scaled = march(dimensionless_kerr_system(kGrid, {}), to_dimensionless(dp, c), 2.0 / c.beta, steps);
  CHECK(pair_distance(scaled.states.back(), physical.states.back()) <= 1e-6);
}

TEST_CASE("blow-up aborts with the last finite station") {
  const auto p = kerr(1.0);
  const DirectedPair dp{wave_packet(kGrid, 0.3, 25.0, 400.0), Signal(kGrid)};
  try {
    propagate_nonlinear(dp, 50.0, 4, p, kGrid);
    FAIL("expected BlowUpError");
  } catch (const BlowUpError& e) {
    const auto& part = e.partial();
    REQUIRE_FALSE(part.states.empty());
    for (const auto& s : part.states) {
      for (std::size_t i = 0; i < kGrid.size(); ++i) REQUIRE(std::isfinite(s.pi[i]));
    }
  }
}
