#include <benchmark/benchmark.h>

#include "ggmeval/common.hpp"
#include "ggmeval/metrics.hpp"

namespace {

using namespace ggmeval;

DenseMatrix random_embedding(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = rng.uniform_real(-1.0, 1.0);
  return m;
}

void BM_FrechetDistance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  DenseMatrix a = random_embedding(n, d, 1);
  DenseMatrix b = random_embedding(n, d, 2);
  for (auto _ : state) benchmark::DoNotOptimize(frechet_distance(a, b));
}
BENCHMARK(BM_FrechetDistance)->Args({1000, 64})->Args({1000, 74})->Args({4000, 64});

void BM_MmdRbf(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  DenseMatrix a = random_embedding(n, 64, 3);
  DenseMatrix b = random_embedding(n, 64, 4);
  const double sigma = rbf_sigma(a);
  for (auto _ : state) benchmark::DoNotOptimize(mmd(a, b, RbfKernel{sigma}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MmdRbf)->RangeMultiplier(2)->Range(250, 2000)->Complexity(benchmark::oNSquared);

void BM_PrecisionRecall(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  DenseMatrix a = random_embedding(n, 64, 5);
  DenseMatrix b = random_embedding(n, 64, 6);
  for (auto _ : state) benchmark::DoNotOptimize(precision_recall(a, b, KnnConfig{5}));
}
BENCHMARK(BM_PrecisionRecall)->Arg(500)->Arg(1000);

void BM_DensityCoverage(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  DenseMatrix a = random_embedding(n, 64, 7);
  DenseMatrix b = random_embedding(n, 64, 8);
  for (auto _ : state) benchmark::DoNotOptimize(density_coverage(a, b, KnnConfig{5}));
}
BENCHMARK(BM_DensityCoverage)->Arg(500)->Arg(1000);

}  // namespace
