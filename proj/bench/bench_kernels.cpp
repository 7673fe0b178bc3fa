// Serial reference kernels against their OpenMP counterparts.  Each pair
// computes identical output; only the wall time differs.

#include <benchmark/benchmark.h>

#include "ytlab/brownian.hpp"
#include "ytlab/lpp.hpp"
#include "ytlab/model.hpp"
#include "ytlab/randmat.hpp"

namespace {

ytlab::Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ytlab::Exec::serial : ytlab::Exec::parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_TwReference(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ytlab::randmat::tw_reference(200, 400, 11, exec_of(state)));
  label(state);
}

void BM_DkBatch(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ytlab::brownian::d_k_batch(20, 500, 200, 12, exec_of(state)));
  label(state);
}

void BM_LkBatch(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(ytlab::brownian::l_k_batch(4, 4, 1.0, 1000, ytlab::brownian::BundleMode::exchangeable,
                                                        200, 13, exec_of(state)));
  }
  label(state);
}

void BM_GapMc(benchmark::State& state) {
  const auto dist = ytlab::model::equal_tail_distribution(50, 0.01, 1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(ytlab::lpp::gap_mc(dist, 1000, 200, 14, exec_of(state)));
  label(state);
}

}  // namespace

BENCHMARK(BM_TwReference)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DkBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_LkBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GapMc)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
