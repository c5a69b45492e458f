#include <benchmark/benchmark.h>

#include "gridmaze/dataset.hpp"
#include "gridmaze/generator.hpp"

using namespace gridmaze;

static void BM_Generate(benchmark::State& state) {
  MazeSpec spec;
  spec.rows = spec.cols = static_cast<int>(state.range(0));
  spec.wall_density = 0.25;
  spec.trap_count = 3;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    spec.seed = seed++;
    benchmark::DoNotOptimize(generate(spec));
  }
}
BENCHMARK(BM_Generate)->Arg(9)->Arg(20);

static void BM_GenerateUnreachable(benchmark::State& state) {
  MazeSpec spec;
  spec.rows = spec.cols = 12;
  spec.wall_density = 0.2;
  spec.reachable_target = false;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    spec.seed = seed++;
    benchmark::DoNotOptimize(generate(spec));
  }
}
BENCHMARK(BM_GenerateUnreachable);

static void BM_AssembleDefaultBenchmark(benchmark::State& state) {
  const auto config = default_benchmark_config();
  for (auto _ : state) benchmark::DoNotOptimize(assemble_benchmark(config, 2026));
}
BENCHMARK(BM_AssembleDefaultBenchmark)->Unit(benchmark::kMillisecond)->Iterations(3);
