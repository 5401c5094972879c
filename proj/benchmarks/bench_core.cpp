#include <benchmark/benchmark.h>

#include "nonlocal/classical.hpp"
#include "nonlocal/game.hpp"
#include "nonlocal/hermitian.hpp"
#include "nonlocal/quantum.hpp"
#include "nonlocal/report.hpp"
#include "test_support.hpp"

namespace {

using namespace nonlocal;

void BM_EigHermitian(benchmark::State& state) {
  const CMatrix h = nonlocal::testing::random_hermitian(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eig_hermitian(h));
}
BENCHMARK(BM_EigHermitian)->Arg(4)->Arg(9);

void BM_ClassicalCglmp(benchmark::State& state) {
  const GameSpec g = builtin_game("cglmp");
  for (auto _ : state) benchmark::DoNotOptimize(classical_value(g));
}
BENCHMARK(BM_ClassicalCglmp);

void BM_OptimizePlanar(benchmark::State& state) {
  const GameSpec g = builtin_game("g1");
  PlanarSearchOptions opts;
  opts.grid_points = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(optimize_planar(g, opts));
}
BENCHMARK(BM_OptimizePlanar)->Arg(91)->Arg(181)->Unit(benchmark::kMillisecond);

void BM_AnalyzeCglmp(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_analyze("cglmp"));
}
BENCHMARK(BM_AnalyzeCglmp)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
