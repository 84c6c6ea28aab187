// Serial vs OpenMP timings for the enumeration kernels.

#include "cocycle_lab/kernels.hpp"
#include "cocycle_lab/scenarios.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace cocycle_lab;

namespace {

const Cocycle& pair_cocycle() {
  static const Cocycle c = two_matrix_cocycle();
  return c;
}

void bm_max_word_norm_serial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(max_word_norm_serial(pair_cocycle(), state.range(0), NormField::euclidean()));
}

void bm_max_word_norm_parallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(max_word_norm_parallel(pair_cocycle(), state.range(0), NormField::euclidean()));
}

void bm_periodic_exponents_serial(benchmark::State& state) {
  const auto words = enumerate_periodic_words(pair_cocycle().base(), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(periodic_exponents_serial(pair_cocycle(), words));
}

void bm_periodic_exponents_parallel(benchmark::State& state) {
  const auto words = enumerate_periodic_words(pair_cocycle().base(), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(periodic_exponents_parallel(pair_cocycle(), words));
}

std::vector<double> unit_gauge(int grid) {
  std::vector<double> g(grid);
  for (int i = 0; i < grid; ++i) {
    const double t = M_PI * i / grid;
    g[i] = std::max(std::abs(std::cos(t)), std::abs(std::sin(t)));
  }
  return g;
}

void bm_barabanov_step_serial(benchmark::State& state) {
  const auto g = unit_gauge(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(barabanov_step_serial(two_matrix_pair(), g, 0.0));
}

void bm_barabanov_step_parallel(benchmark::State& state) {
  const auto g = unit_gauge(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(barabanov_step_parallel(two_matrix_pair(), g, 0.0));
}

}  // namespace

BENCHMARK(bm_max_word_norm_serial)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_max_word_norm_parallel)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_periodic_exponents_serial)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_periodic_exponents_parallel)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_barabanov_step_serial)->Arg(720)->Arg(2880)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_barabanov_step_parallel)->Arg(720)->Arg(2880)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
