#include <benchmark/benchmark.h>

#include "plascor/corrector.hpp"
#include "plascor/load_history.hpp"
#include "plascor/material.hpp"

namespace {

plascor::MaterialParams bench_material() {
  return plascor::MaterialParams::make(200000.0, 0.3, 100.0, 40000.0, 400.0, 100.0,
                                       10.0);
}

// One point over a cyclic history; counter reports point-steps per second.
void bm_integrate_point(benchmark::State& state) {
  const auto params = bench_material();
  const auto load = plascor::make_triangle_cycles(1.0, 10, 25);
  const double svm = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto series = plascor::integrate_point(svm, load, params);
    benchmark::DoNotOptimize(series.samples.data());
  }
  state.counters["point_steps/s"] = benchmark::Counter(
      static_cast<double>(state.iterations() * load.size()),
      benchmark::Counter::kIsRate);
}

void bm_single_step(benchmark::State& state) {
  const auto params = bench_material();
  const plascor::SolverSettings settings;
  plascor::ScalarCorrectorState st;
  const double svm = 400.0;
  double f = 0.0;
  for (auto _ : state) {
    const double f_next = f + 0.01;
    if (auto next = plascor::step(st, f, f_next, svm, params, settings)) st = *next;
    f = f_next;
    if (f > 1.0) {
      st = {};
      f = 0.0;
    }
    benchmark::DoNotOptimize(st);
  }
}

} // namespace

BENCHMARK(bm_integrate_point)->Arg(50)->Arg(100)->Arg(400)->Arg(800);
BENCHMARK(bm_single_step);
