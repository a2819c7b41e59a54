#include <benchmark/benchmark.h>

#include "fracou/constants.hpp"
#include "fracou/estimators.hpp"
#include "fracou/fbm.hpp"
#include "fracou/fou.hpp"
#include "fracou/numerics.hpp"

using namespace fracou;

static void BM_FbmCirculant(benchmark::State& state) {
  const fbm::TimeGrid grid(static_cast<std::size_t>(state.range(0)), 1e-3);
  std::uint64_t id = 0;
  for (auto _ : state) {
    numerics::SeededStream s(1, id++);
    benchmark::DoNotOptimize(fbm::sample_fbm_circulant(grid, fbm::Hurst(0.6), s));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FbmCirculant)->RangeMultiplier(4)->Range(256, 1 << 20)->Complexity(benchmark::oNLogN);

static void BM_FbmCholesky(benchmark::State& state) {
  const fbm::TimeGrid grid(static_cast<std::size_t>(state.range(0)), 1e-3);
  std::uint64_t id = 0;
  for (auto _ : state) {
    numerics::SeededStream s(1, id++);
    benchmark::DoNotOptimize(fbm::sample_fbm_cholesky(grid, fbm::Hurst(0.6), s));
  }
}
BENCHMARK(BM_FbmCholesky)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);

static void BM_SimulateFou(benchmark::State& state) {
  const fou::ModelParams p(1.0, fbm::Hurst(0.6));
  const auto d = fou::make_design(static_cast<std::size_t>(state.range(0)), 0.6, p.hurst);
  std::uint64_t id = 0;
  for (auto _ : state) {
    numerics::SeededStream s(2, id++);
    benchmark::DoNotOptimize(fou::simulate_fou(p, d.grid(), fou::RefinementFactor(), s));
  }
}
BENCHMARK(BM_SimulateFou)->Arg(1 << 14)->Arg(1 << 18)->Unit(benchmark::kMillisecond);

static void BM_Ef2(benchmark::State& state) {
  const constants::KernelSpec spec(1.0, fbm::Hurst(0.6), static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(constants::ef2(spec));
}
BENCHMARK(BM_Ef2)->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_EstimateSeries(benchmark::State& state) {
  const fou::ModelParams p(1.0, fbm::Hurst(0.6));
  const auto d = fou::make_design(static_cast<std::size_t>(state.range(0)), 0.6, p.hurst);
  numerics::SeededStream s(3, 0);
  const auto path = fou::simulate_fou(p, d.grid(), fou::RefinementFactor(), s);
  const auto ks = estimators::geometric_checkpoints(d.n, 1.05);
  estimators::SigmaTable sigma(p, constants::SigmaMode::asymptotic);
  for (auto _ : state) benchmark::DoNotOptimize(estimators::estimate_series(path, d, p, sigma, ks));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateSeries)->Arg(1 << 14)->Arg(1 << 18);

BENCHMARK_MAIN();
