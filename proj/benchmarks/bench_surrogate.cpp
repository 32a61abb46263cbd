#include <benchmark/benchmark.h>

#include <random>

#include "plascor/load_history.hpp"
#include "plascor/material.hpp"
#include "plascor/surrogate.hpp"

namespace {

void bm_gp_predict(benchmark::State& state) {
  const auto params = plascor::MaterialParams::make(200000.0, 0.3, 100.0, 40000.0,
                                                    400.0, 100.0, 10.0);
  const auto load = plascor::make_ramp(1.0, 20);
  const auto qoi = plascor::QoiSelector::parse("ep_final");
  const auto set = plascor::build_training_set(params, load, 150, 8.0, qoi);
  const auto model = plascor::train(set);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(1.0, 8.0 * params.sigma_y);
  std::vector<double> inputs(static_cast<std::size_t>(state.range(0)));
  for (auto& v : inputs) v = dist(rng);

  for (auto _ : state) {
    auto pred = plascor::predict(model, inputs);
    benchmark::DoNotOptimize(pred.values.data());
  }
  state.counters["predictions/s"] = benchmark::Counter(
      static_cast<double>(state.iterations()) * static_cast<double>(inputs.size()),
      benchmark::Counter::kIsRate);
}

} // namespace

BENCHMARK(bm_gp_predict)->Arg(1000)->Arg(10000);
