// Serial reference against the OpenMP kernels: level extension and the
// catalogue-wide property pass.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "matcat/catalogue.hpp"
#include "matcat/orderly.hpp"

using namespace matcat;

namespace {

const std::vector<std::vector<Matroid>>& levels() {
  static const auto cached = enumerate(7);
  return cached;
}

std::vector<Matroid> records(int max_n) {
  std::vector<Matroid> out;
  for (int n = 0; n <= max_n; ++n) out.insert(out.end(), levels()[n].begin(), levels()[n].end());
  return out;
}

void next_level_run(benchmark::State& state, bool parallel) {
  const auto& parents = levels()[static_cast<std::size_t>(state.range(0))];
  EnumOptions options;
  options.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(next_level(parents, options));
  state.counters["parents"] = static_cast<double>(parents.size());
  state.counters["threads"] = parallel ? omp_get_max_threads() : 1;
}

void property_run(benchmark::State& state, bool parallel) {
  const auto input = records(static_cast<int>(state.range(0)));
  PropertyOptions options;
  options.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(build_property_table(input, options));
  state.counters["records"] = static_cast<double>(input.size());
  state.counters["threads"] = parallel ? omp_get_max_threads() : 1;
}

void BM_NextLevelSerial(benchmark::State& state) { next_level_run(state, false); }
void BM_NextLevelParallel(benchmark::State& state) { next_level_run(state, true); }
void BM_PropertiesSerial(benchmark::State& state) { property_run(state, false); }
void BM_PropertiesParallel(benchmark::State& state) { property_run(state, true); }

}  // namespace

BENCHMARK(BM_NextLevelSerial)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NextLevelParallel)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PropertiesSerial)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PropertiesParallel)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
