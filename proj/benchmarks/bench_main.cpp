#include <benchmark/benchmark.h>

#include "vlc/experiment.hpp"

using namespace vlc;

namespace {

const Workspace& baseline_ws() {
  static const Workspace ws = make_workspace(SceneSpec::baseline());
  return ws;
}

const DecodingMap& baseline_map() {
  static const DecodingMap m = [] {
    MapOptions mo;
    mo.use_symmetry = true;
    return build_map(baseline_ws().scene, baseline_ws().layers, 0, mo);
  }();
  return m;
}

void BM_GreedyOrder(benchmark::State& state) {
  const auto& ws = baseline_ws();
  const double nv = ws.scene.noise_sigma * ws.scene.noise_sigma;
  const auto h = gain_vector(ws.scene, ws.scene.grid.local(13, 13), 0);
  const std::size_t tau = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(greedy_order(h, ws.layers, nv, tau));
}
BENCHMARK(BM_GreedyOrder)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_BuildMap(benchmark::State& state) {
  const auto& ws = baseline_ws();
  MapOptions mo;
  mo.use_symmetry = state.range(0) != 0;
  mo.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(build_map(ws.scene, ws.layers, 0, mo));
}
BENCHMARK(BM_BuildMap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ReduceMap(benchmark::State& state) {
  const auto& ws = baseline_ws();
  for (auto _ : state) {
    DecodingMap m = baseline_map();
    benchmark::DoNotOptimize(reduce_map(m, ws.layers, 1e-5, 0.1, 1));
  }
}
BENCHMARK(BM_ReduceMap)->Unit(benchmark::kMillisecond);

void BM_Association(benchmark::State& state) {
  const auto& ws = baseline_ws();
  SweepConfig sc;
  const auto users = make_users(ws, 0, user_positions(sc, 0.1, -0.2), &baseline_map(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_association(users, ws.layers, sc.ga));
}
BENCHMARK(BM_Association)->Unit(benchmark::kMillisecond);

void BM_Anchor(benchmark::State& state) {
  SweepConfig sc;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_anchor(baseline_ws(), sc, 0.1, -0.2, &baseline_map()));
}
BENCHMARK(BM_Anchor)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
