#include <benchmark/benchmark.h>

#include "ascifit/datagen.hpp"
#include "ascifit/estimator.hpp"
#include "ascifit/harness.hpp"

namespace {

void BM_Fit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ascifit::AsciModel model;
  model.mu = ascifit::linear_signal(n, 0.2);
  model.eta = 0.2;
  model.sigma = 1.0;
  model.adversary = ascifit::adversary::Rademacher{0.5};
  const auto r = ascifit::generate(model, n, 3).r;
  ascifit::EstimatorConfig cfg;
  cfg.eta = 0.2;
  for (auto _ : state) benchmark::DoNotOptimize(ascifit::fit(r, cfg));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fit)->RangeMultiplier(10)->Range(100, 1'000'000)->Complexity()->Unit(benchmark::kMillisecond);

void BM_Replication(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ascifit::run_replication(0.2, 0.5, 1.0, n, 0, 11, "linear"));
}
BENCHMARK(BM_Replication)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
