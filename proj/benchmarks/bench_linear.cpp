#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "nlsgs/banded.hpp"
#include "nlsgs/dst.hpp"

namespace {

std::vector<double> noise(std::size_t n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

void BM_Dst1D(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  nlsgs::SineTransform t({n});
  auto v = noise(n);
  for (auto _ : state) {
    t.apply(v, v);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dst1D)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oNLogN);

void BM_Dst2D(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  nlsgs::SineTransform t({n, n});
  auto v = noise(n * n);
  for (auto _ : state) {
    t.apply(v, v);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_Dst2D)->RangeMultiplier(2)->Range(64, 1024);

// Shifted P2-like band: bandwidth 2, diagonally dominant.
nlsgs::SymmetricBand band(std::size_t n, std::size_t p) {
  nlsgs::SymmetricBand a(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    a.at(i, i) = 4.0 + 2.0 * static_cast<double>(p);
    for (std::size_t k = 1; k <= p && k <= i; ++k) a.at(i, i - k) = -1.0;
  }
  return a;
}

void BM_BandFactor(benchmark::State& state) {
  const auto a = band(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) {
    nlsgs::BandLDLT f(a);
    benchmark::DoNotOptimize(f.negative_pivots());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BandFactor)->RangeMultiplier(4)->Range(1024, 262144)->Complexity(benchmark::oN);

void BM_BandSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const nlsgs::BandLDLT f(band(n, 2));
  const auto b = noise(n);
  std::vector<double> x(n);
  for (auto _ : state) {
    f.solve(b, x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BandSolve)->RangeMultiplier(4)->Range(1024, 262144)->Complexity(benchmark::oN);

}  // namespace

BENCHMARK_MAIN();
