#include <random>

#include <benchmark/benchmark.h>

#include <botsentinel/arima.hpp>
#include <botsentinel/spectral.hpp>
#include <botsentinel/svm.hpp>

using namespace botsentinel;

namespace {

std::vector<double> counts(std::size_t n) {
  std::mt19937_64 rng(1);
  std::poisson_distribution<int> pois(4.0);
  std::vector<double> x(n);
  for (auto& v : x) v = pois(rng);
  return x;
}

void BM_PeriodogramFft(benchmark::State& state) {
  const auto x = counts(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(periodogram(x, SpectralMethod::kFft));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PeriodogramFft)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_PeriodogramDirect(benchmark::State& state) {
  const auto x = counts(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(periodogram(x, SpectralMethod::kDirect));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PeriodogramDirect)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_SmoRbf(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  Matrix x(n, 10);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = i % 2 ? 1 : -1;
    for (std::size_t c = 0; c < 10; ++c) x(i, c) = g(rng) + 0.5 * y[i];
  }
  const Kernel k{KernelType::kRbf, default_rbf_gamma(x)};
  for (auto _ : state) benchmark::DoNotOptimize(smo_solve(x, y, k, {}));
}
BENCHMARK(BM_SmoRbf)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_ArmaSelection(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  double prev = 0;
  for (auto& v : x) v = prev = 0.6 * prev + g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(fit_arima(x));
}
BENCHMARK(BM_ArmaSelection)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
