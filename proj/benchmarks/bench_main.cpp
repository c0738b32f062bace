#include <array>
#include <numbers>

#include <benchmark/benchmark.h>

#include <viscowave/integrator.hpp>
#include <viscowave/wellconst.hpp>

using namespace viscowave;

namespace {

Field sine(const SpatialGrid& g, double amplitude) {
  const std::array<int, 1> mode{1};
  return Field::sine_mode(g, mode, amplitude);
}

MemoryState filled_buffer(int n, int depth, bool fast) {
  const auto g = SpatialGrid::line(std::numbers::pi, n);
  const Field u = sine(g, 0.5);
  MemoryState state(HistoryDatum::constant(u), RelaxationKernel::exponential(1.0, 1.0), {1e9, 1, fast});
  for (int j = 1; j <= depth; ++j) state.record(0.01 * j, (1.0 + 1e-3 * j) * u);
  return state;
}

void BM_MemoryFast(benchmark::State& st) {
  const auto state = filled_buffer(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)), true);
  const Field now = sine(state.extension().grid(), 0.6);
  for (auto _ : st) benchmark::DoNotOptimize(state.evaluate(now, true, true));
}
BENCHMARK(BM_MemoryFast)->Args({200, 1000})->Args({800, 4000});

void BM_MemoryDirect(benchmark::State& st) {
  const auto state = filled_buffer(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)), false);
  const Field now = sine(state.extension().grid(), 0.6);
  for (auto _ : st) benchmark::DoNotOptimize(state.evaluate_direct(now, true, true));
}
BENCHMARK(BM_MemoryDirect)->Args({200, 1000})->Args({800, 4000});

void BM_Step(benchmark::State& st) {
  const auto g = SpatialGrid::line(std::numbers::pi, static_cast<int>(st.range(0)));
  const Dynamics dyn{RelaxationKernel::exponential(1.0, 1.0), 1.0, 3.0, {}};
  SimState s = make_initial_state(HistoryDatum::constant(sine(g, 0.5)), dyn, stability_bound(g, 2.0, 0.5));
  for (auto _ : st) step(s, dyn);
}
BENCHMARK(BM_Step)->Arg(200)->Arg(803);

void BM_SobolevGamma(benchmark::State& st) {
  const auto g = SpatialGrid::line(std::numbers::pi, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(sobolev_gamma(g, 3.0));
}
BENCHMARK(BM_SobolevGamma)->Arg(200)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
