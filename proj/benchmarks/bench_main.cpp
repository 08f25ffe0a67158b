#include <vector>

#include <benchmark/benchmark.h>

#include "morgreed/estimator.hpp"
#include "morgreed/greedy.hpp"
#include "morgreed/surrogate.hpp"
#include "morgreed/synthetic.hpp"

using namespace morgreed;

namespace {

const ParametricSystem& system_of(std::size_t order) {
  static std::vector<std::pair<std::size_t, ParametricSystem>> cache;
  for (const auto& [n, sys] : cache) {
    if (n == order) return sys;
  }
  SyntheticSpec spec;
  spec.order = order;
  spec.delays = 10;
  spec.inputs = spec.outputs = 3;
  cache.emplace_back(order, ParametricSystem(generate_synthetic(spec)));
  return cache.back().second;
}

void BM_FullOrderSolve(benchmark::State& state) {
  const ParametricSystem& sys = system_of(static_cast<std::size_t>(state.range(0)));
  const FrequencyPoint p = FrequencyPoint::from_hz(3e9);
  for (auto _ : state) benchmark::DoNotOptimize(solve_fom(sys, p));
}
BENCHMARK(BM_FullOrderSolve)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

// One estimator sweep over 100 fine points with an 8-snapshot basis.
void BM_EstimatorSweep(benchmark::State& state) {
  const ParametricSystem& sys = system_of(static_cast<std::size_t>(state.range(0)));
  GreedyConfig config;
  config.tol = 1e-14;
  config.max_iterations = 8;
  const GreedyResult r = run_standard(sys, make_grid(1e6, 2e10, 30, Spacing::Linear), config);
  const BoundEstimator bound(sys, r.rom, r.estimator);
  const auto fine = make_grid(1e6, 2e10, 100, Spacing::Linear);
  for (auto _ : state) {
    double worst = 0.0;
    for (const auto& p : fine) worst = std::max(worst, bound.estimate(p));
    benchmark::DoNotOptimize(worst);
  }
}
BENCHMARK(BM_EstimatorSweep)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_RbfFitAndSweep(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  std::vector<double> centers;
  std::vector<double> values;
  Rng rng(3);
  for (std::size_t i = 0; i < m; ++i) {
    centers.push_back(static_cast<double>(i) / static_cast<double>(m - 1));
    values.push_back(rng.uniform(1e-4, 1.0));
  }
  std::vector<double> fine;
  for (int i = 0; i < 100; ++i) fine.push_back(i / 99.0);
  for (auto _ : state) {
    const RbfSurrogate s = rbf_fit(centers, values);
    benchmark::DoNotOptimize(select_candidates(s, fine, 5, centers));
  }
}
BENCHMARK(BM_RbfFitAndSweep)->Arg(10)->Arg(25);

}  // namespace
BENCHMARK_MAIN();
