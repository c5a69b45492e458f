#include <benchmark/benchmark.h>

#include <nlohmann/json.hpp>

#include "gridmaze/generator.hpp"
#include "gridmaze/grader.hpp"

using namespace gridmaze;

namespace {

MazeInstance sample() {
  MazeSpec spec;
  spec.rows = spec.cols = 20;
  spec.wall_density = 0.1;
  spec.seed = 11;
  return generate(spec);
}

std::string answer(const MazeInstance& m) {
  std::string path;
  for (Move mv : m.annotation.accepted_paths.back()) path += std::string(path.empty() ? "\"" : ",\"") + to_char(mv) + "\"";
  return "Here is my answer:\n```json\n{\"reachable\": true, \"path_length\": " +
         std::to_string(*m.annotation.shortest_len) + ", \"path\": [" + path + "]}\n```";
}

}  // namespace

static void BM_ParseResponse(benchmark::State& state) {
  const std::string text = answer(sample());
  for (auto _ : state) benchmark::DoNotOptimize(parse_response(text));
}
BENCHMARK(BM_ParseResponse);

static void BM_Grade(benchmark::State& state) {
  const MazeInstance m = sample();
  const SolverResponse r = parse_response(answer(m));
  const auto mode = static_cast<GradingMode>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(grade(r, m.annotation, m.grid, mode));
}
BENCHMARK(BM_Grade)->Arg(0)->Arg(1);
