// Serial vs OpenMP paths of the seed sweeps.

#include <benchmark/benchmark.h>

#include "sqhi/bench.hpp"
#include "sqhi/explorer.hpp"

namespace {

std::vector<sqhi::Scenario> programs(std::size_t processes) {
  std::vector<sqhi::Scenario> out;
  for (std::uint64_t s = 0; s < 32; ++s) out.push_back(sqhi::random_scenario(s, 5, 6, processes, 2));
  return out;
}

void BM_ScheduleSweepSerial(benchmark::State& state) {
  const auto scs = programs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sqhi::sweep_random(scs, 50).schedules);
}

void BM_ScheduleSweepParallel(benchmark::State& state) {
  const auto scs = programs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sqhi::sweep_random_parallel(scs, 50).schedules);
}

void BM_SurveySerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqhi::bench::survey_sweep({1024, 4096}, 0.5, {1, 2, 3, 4}, 2000, 20));
  }
}

void BM_SurveyParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqhi::bench::survey_sweep_parallel({1024, 4096}, 0.5, {1, 2, 3, 4}, 2000, 20));
  }
}

}  // namespace

BENCHMARK(BM_ScheduleSweepSerial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScheduleSweepParallel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SurveySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SurveyParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
