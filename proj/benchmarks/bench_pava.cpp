#include <benchmark/benchmark.h>

#include "ascifit/datagen.hpp"
#include "ascifit/estimator.hpp"
#include "ascifit/isotonic.hpp"

namespace {

std::vector<double> folded_sample(std::size_t n) {
  ascifit::AsciModel model;
  model.mu = ascifit::linear_signal(n, 0.2);
  model.eta = 0.2;
  model.sigma = 1.0;
  model.adversary = ascifit::adversary::Rademacher{0.5};
  return ascifit::preprocess(ascifit::generate(model, n, 42).r);
}

void BM_Pava(benchmark::State& state) {
  const auto t = folded_sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ascifit::pava(t));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Pava)->RangeMultiplier(10)->Range(100, 1'000'000)->Complexity(benchmark::oN);

void BM_PavaLowerBounded(benchmark::State& state) {
  const auto t = folded_sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ascifit::pava_lower_bounded(t, 0.2));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PavaLowerBounded)->RangeMultiplier(10)->Range(100, 1'000'000)->Complexity(benchmark::oN);

}  // namespace

BENCHMARK_MAIN();
