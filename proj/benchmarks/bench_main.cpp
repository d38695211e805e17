#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "metapulse/evolution.hpp"
#include "metapulse/reference.hpp"

using namespace metapulse;

namespace {

Signal packet(const TimeGrid& g, double carrier, double width, double amplitude) {
  std::vector<double> v(g.size());
  const double center = 0.5 * g.window();
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double tau = g.time(j) - center;
    v[j] = amplitude * std::exp(-tau * tau / (2.0 * width * width)) * std::sin(carrier * tau);
  }
  return remove_mean_and_nyquist(Signal(g, std::move(v)));
}

void slowness_apply(benchmark::State& state) {
  const TimeGrid g(static_cast<std::size_t>(state.range(0)), 0.37);
  const auto a = make_multiplier(MultiplierKind::a, DrudeParams::normalized(1.0, 1.0), g);
  const Signal s = packet(g, 0.3, 0.05 * g.window(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(apply(a, s));
}
BENCHMARK(slowness_apply)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

// Four steps per iteration: the march rejects shorter runs.
void kerr_march_step(benchmark::State& state) {
  const TimeGrid g(static_cast<std::size_t>(state.range(0)), 0.4);
  const auto p = DrudeParams::normalized(1.0, 1.0, 1.0);
  const auto sys = physical_kerr_system(p, g, {});
  const DirectedPair dp{packet(g, 0.3, 0.05 * g.window(), 5.0), Signal(g)};
  for (auto _ : state) benchmark::DoNotOptimize(march(sys, dp, 0.04, 4));
}
BENCHMARK(kerr_march_step)->RangeMultiplier(4)->Range(1 << 10, 1 << 14);

void yee_step(benchmark::State& state) {
  const auto medium = YeeMedium::from(DrudeParams::normalized(1.0, 1.0));
  const YeeGrid1D grid{static_cast<std::size_t>(state.range(0)), 0.05, 0.025, 0.0};
  auto s = MaxwellState::zeros(grid);
  s.e[grid.nx / 2] = 1.0;
  for (auto _ : state) advance(s, grid, medium);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(yee_step)->RangeMultiplier(4)->Range(1 << 10, 1 << 15);

}  // namespace
BENCHMARK_MAIN();
