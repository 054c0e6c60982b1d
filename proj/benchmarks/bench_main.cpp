#include <benchmark/benchmark.h>

#include "lfd/global_opt.hpp"
#include "lfd/joint_refine.hpp"
#include "lfd/sepi.hpp"
#include "lfd/synthetic.hpp"

namespace {

const lfd::SyntheticScene& scene() {
  static const lfd::SyntheticScene s =
      lfd::generate_synthetic(lfd::SceneSpec::load(LFD_SCENE_DIR "/two_planes.cfg"));
  return s;
}

void BM_InitialDepthMap(benchmark::State& state) {
  lfd::SepiConfig cfg;
  cfg.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lfd::initial_depth_map(scene().lf, cfg));
  state.SetItemsProcessed(state.iterations() * scene().lf.height() * scene().lf.width());
}
BENCHMARK(BM_InitialDepthMap)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_RefineField(benchmark::State& state) {
  lfd::JointConfig cfg;
  cfg.sepi.workers = static_cast<int>(state.range(0));
  const lfd::SlopeField init = lfd::initial_depth_map(scene().lf, cfg.sepi);
  for (auto _ : state) benchmark::DoNotOptimize(lfd::refine_field(scene().lf, init, cfg));
  state.SetItemsProcessed(state.iterations() * init.height() * init.width());
}
BENCHMARK(BM_RefineField)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SolveGlobal(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  lfd::Array2D<double> d(n, n), w(n, n, 1.0), s(n, n, 1.0);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      d(y, x) = (x < n / 2 ? 0.5 : 1.5) + 0.05 * ((x * 7 + y * 13) % 5 - 2);
      if ((x + y) % 3 == 0) w(y, x) = 0.2;
    }
  for (auto _ : state) benchmark::DoNotOptimize(lfd::solve_global(d, w, s));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_SolveGlobal)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();

} // namespace

BENCHMARK_MAIN();
