#include <benchmark/benchmark.h>

#include "levysup/approx.hpp"
#include "levysup/fluctuation.hpp"
#include "levysup/model_config.hpp"
#include "levysup/pathsim.hpp"
#include "levysup/stats.hpp"

namespace {

using levysup::RandomStream;

void BM_SigmaSampler(benchmark::State& state) {
  const auto spec = *levysup::preset("A");
  const auto policy = levysup::sigma_policy(spec);
  std::uint64_t i = 0;
  for (auto _ : state) {
    RandomStream rng(1, i++);
    benchmark::DoNotOptimize(levysup::simulate_until_sigma(spec, policy, rng));
  }
}
BENCHMARK(BM_SigmaSampler);

void BM_GeometricSampler(benchmark::State& state) {
  const auto y = levysup::preset("A")->without_c();
  std::uint64_t i = 0;
  for (auto _ : state) {
    RandomStream rng(1, i++);
    benchmark::DoNotOptimize(levysup::sample_sup_geometric(y, rng));
  }
}
BENCHMARK(BM_GeometricSampler);

void BM_SigmaSamplerTruncatedGamma(benchmark::State& state) {
  const auto full = *levysup::preset("gammaC");
  const auto spec =
      full.with_c(levysup::truncate_subordinator(*full.c(), levysup::TruncationLevel(static_cast<unsigned>(state.range(0)))));
  const auto policy = levysup::sigma_policy(spec);
  std::uint64_t i = 0;
  for (auto _ : state) {
    RandomStream rng(2, i++);
    benchmark::DoNotOptimize(levysup::simulate_until_sigma(spec, policy, rng));
  }
}
BENCHMARK(BM_SigmaSamplerTruncatedGamma)->Arg(1)->Arg(16)->Arg(64);

void BM_PhiZero(benchmark::State& state) {
  const auto b = *levysup::preset("B");
  for (auto _ : state) benchmark::DoNotOptimize(levysup::phi_zero(b));
}
BENCHMARK(BM_PhiZero);

void BM_CrossingLawTable(benchmark::State& state) {
  const auto a = *levysup::preset("A");
  for (auto _ : state) benchmark::DoNotOptimize(levysup::crossing_law(a));
}
BENCHMARK(BM_CrossingLawTable)->Unit(benchmark::kMillisecond);

void BM_KsTwoSample(benchmark::State& state) {
  const auto y = levysup::preset("A")->without_c();
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = levysup::sample_geometric_suprema(y, n, 1, 1).values;
  const auto b = levysup::sample_geometric_suprema(y, n, 2, 1).values;
  for (auto _ : state) benchmark::DoNotOptimize(levysup::ks_two_sample(a, b, 0.05));
}
BENCHMARK(BM_KsTwoSample)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
