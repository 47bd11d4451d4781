#include <benchmark/benchmark.h>

#include "ascifit/datagen.hpp"
#include "ascifit/estimator.hpp"
#include "ascifit/folded_normal.hpp"
#include "ascifit/isotonic.hpp"

namespace {

void BM_FoldedMean(benchmark::State& state) {
  double mu = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ascifit::folded_mean({mu, 1.0}));
    mu = mu < 5.0 ? mu + 0.01 : 0.3;
  }
}
BENCHMARK(BM_FoldedMean);

void BM_FoldedMeanInverse(benchmark::State& state) {
  double u = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ascifit::folded_mean_inverse(u, 1.0, 0.2));
    u = u < 5.0 ? u + 0.01 : 1.0;
  }
}
BENCHMARK(BM_FoldedMeanInverse);

void BM_BigG(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ascifit::AsciModel model;
  model.mu = ascifit::linear_signal(n, 0.2);
  model.eta = 0.2;
  model.sigma = 1.0;
  model.adversary = ascifit::adversary::Rademacher{0.5};
  const auto t_hat = ascifit::pava(ascifit::preprocess(ascifit::generate(model, n, 7).r)).values;
  ascifit::EstimatorConfig cfg;
  cfg.eta = 0.2;
  for (auto _ : state) benchmark::DoNotOptimize(ascifit::big_g(1.0, t_hat, cfg));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BigG)->RangeMultiplier(10)->Range(100, 1'000'000)->Complexity();

}  // namespace

BENCHMARK_MAIN();
