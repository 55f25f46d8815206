// Serial reference vs OpenMP kernel for each parallel code path. The exact
// arithmetic makes the outputs bit-identical; these measure the speedup only.
#include <benchmark/benchmark.h>

#include "qmlab/qmpoly.hpp"
#include "qmlab/qseries.hpp"
#include "qmlab/ssing.hpp"

using namespace qmlab;

namespace {

QSeries series_operand(int n) { return eisenstein_qexp(4, n); }

QMPoly poly_operand(int depth) { return derive_n(QMPoly::Q(), depth); }

void bm_series_mul_serial(benchmark::State& state) {
  QSeries a = series_operand(static_cast<int>(state.range(0)));
  QSeries b = eisenstein_qexp(6, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(series_mul_serial(a, b));
}

void bm_series_mul_parallel(benchmark::State& state) {
  QSeries a = series_operand(static_cast<int>(state.range(0)));
  QSeries b = eisenstein_qexp(6, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(series_mul_parallel(a, b));
}

void bm_poly_mul_serial(benchmark::State& state) {
  QMPoly f = poly_operand(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(poly_mul_serial(f, f));
}

void bm_poly_mul_parallel(benchmark::State& state) {
  QMPoly f = poly_operand(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(poly_mul_parallel(f, f));
}

void bm_derive_serial(benchmark::State& state) {
  QMPoly f = poly_operand(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(derive_serial(f));
}

void bm_derive_parallel(benchmark::State& state) {
  QMPoly f = poly_operand(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(derive_parallel(f));
}

void bm_ss_count_serial(benchmark::State& state) {
  long p = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_supersingular_serial(p));
}

void bm_ss_count_parallel(benchmark::State& state) {
  long p = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_supersingular_parallel(p));
}

BENCHMARK(bm_series_mul_serial)->Arg(200)->Arg(600);
BENCHMARK(bm_series_mul_parallel)->Arg(200)->Arg(600);
BENCHMARK(bm_poly_mul_serial)->Arg(20)->Arg(40);
BENCHMARK(bm_poly_mul_parallel)->Arg(20)->Arg(40);
BENCHMARK(bm_derive_serial)->Arg(60)->Arg(120);
BENCHMARK(bm_derive_parallel)->Arg(60)->Arg(120);
BENCHMARK(bm_ss_count_serial)->Arg(499)->Arg(997);
BENCHMARK(bm_ss_count_parallel)->Arg(499)->Arg(997);

}  // namespace

BENCHMARK_MAIN();
