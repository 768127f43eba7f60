#include <benchmark/benchmark.h>

#include <vector>

#include "pif/fit.hpp"
#include "pif/model.hpp"
#include "pif/params.hpp"
#include "pif/rng.hpp"
#include "pif/sim.hpp"
#include "pif/stats.hpp"
#include "pif/task.hpp"
#include "pif/trace_analysis.hpp"

using namespace pif;

static void bench_predict_per_task(benchmark::State& state) {
  const TaskProfile& task = find_task("BR");
  const ImpairmentCondition c{800, 2, 500, 9000};
  for (auto _ : state) {
    benchmark::DoNotOptimize(tpifm_predict(task, c, PredictionMode::kPerTask));
  }
}
BENCHMARK(bench_predict_per_task);

static void bench_predict_generalized(benchmark::State& state) {
  const TaskProfile& task = find_task("LES");
  const ImpairmentCondition c{800, 2, 500, 9000};
  for (auto _ : state) {
    benchmark::DoNotOptimize(tpifm_predict(task, c, PredictionMode::kGeneralized));
  }
}
BENCHMARK(bench_predict_generalized);

// full two-agent session; stall count drives the event volume
static void bench_simulate_session(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.task = task_preset("BR");
  cfg.network.added_delay_ms = 485;
  cfg.stalls.count = static_cast<int>(state.range(0));
  cfg.stalls.avg_duration_ms = 500;
  cfg.seed = 7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_session(cfg));
  }
  state.SetLabel(std::to_string(cfg.stalls.count) + " stalls");
}
BENCHMARK(bench_simulate_session)->Arg(0)->Arg(3);

static void bench_trace_analysis(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.task = task_preset("BR");
  cfg.stalls.count = 2;
  cfg.stalls.avg_duration_ms = 500;
  const SessionTrace trace = simulate_session(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_art(extract_cycles(trace)));
    benchmark::DoNotOptimize(measure_stall_ratio(trace));
  }
}
BENCHMARK(bench_trace_analysis);

static void bench_fit_exp_decay(benchmark::State& state) {
  Rng rng(11);
  Dataset d;
  for (int i = 0; i < 30; ++i) {
    const double x = 100.0 * i;
    d.points.push_back({x, 4.8 * std::exp(-4.9e-4 * x) + rng.normal(0, 0.05)});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_exp_decay(d));
  }
}
BENCHMARK(bench_fit_exp_decay);

static void bench_rank_correlation(benchmark::State& state) {
  Rng rng(3);
  const int n = static_cast<int>(state.range(0));
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = rng.uniform(1.0, 5.0);
    b[i] = a[i] + rng.normal(0, 0.3);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(srocc(a, b));
    benchmark::DoNotOptimize(pcc(a, b));
  }
}
BENCHMARK(bench_rank_correlation)->Arg(32)->Arg(256);

BENCHMARK_MAIN();
