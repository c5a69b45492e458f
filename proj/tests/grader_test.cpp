#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "gridmaze/errors.hpp"
#include "gridmaze/generator.hpp"
#include "gridmaze/grader.hpp"
#include "gridmaze/serialization.hpp"

using namespace gridmaze;

namespace {

constexpr const char* kExample =
    R"({"grid_size":[5,5],"start_found":true,"goal_found":true,"reachable":true,"path_length":4,"path":["R","R","D","D"]})";

// Reachable annotation of length `len` whose single accepted path is R^len.
Annotation reachable_annotation(int len) {
  Annotation a;
  a.reachable = true;
  a.shortest_len = len;
  a.accepted_paths = {MovePath(static_cast<std::size_t>(len), Move::R)};
  return a;
}

Annotation unreachable_annotation() { return Annotation{}; }

MazeGrid corridor(int len) { return MazeGrid(1, len + 1, {0, 0}, {0, len}); }

SolverResponse response(bool reachable, std::optional<int> len, std::optional<MovePath> path) {
  SolverResponse r;
  r.reachable = reachable;
  r.path_length = len;
  r.path = std::move(path);
  return r;
}

}  // namespace

TEST(ParseResponse, ExampleObject) {
  const SolverResponse r = parse_response(kExample);
  EXPECT_EQ(r.grid_size, (std::pair{5, 5}));
  EXPECT_TRUE(r.start_found);
  EXPECT_TRUE(r.goal_found);
  EXPECT_TRUE(r.reachable);
  EXPECT_EQ(r.path_length, 4);
  EXPECT_EQ(r.path, (MovePath{Move::R, Move::R, Move::D, Move::D}));
  EXPECT_FALSE(r.length_mismatch());
}

TEST(ParseResponse, FencedWithProse) {
  const std::string wrapped = std::string("Let me trace it {carefully}.\n```json\n") + kExample + "\n```\nDone.";
  SolverResponse a = parse_response(kExample);
  SolverResponse b = parse_response(wrapped);
  a.raw_text.clear();
  b.raw_text.clear();
  EXPECT_EQ(a, b);
}

TEST(ParseResponse, Failures) {
  EXPECT_THROW(parse_response("no json here"), ParseFailure);
  EXPECT_THROW(parse_response(R"({"reachable": true, "path": ["R", "X"]})"), ParseFailure);
  EXPECT_THROW(parse_response(R"({"reachable": true, "path": ["R")"), ParseFailure);
  EXPECT_THROW(parse_response(R"({"path": ["R"]})"), ParseFailure);
}

TEST(ParseResponse, LenientForms) {
  const auto a = parse_response(R"({"reachable": "true", "path": "RRDD", "path_length": "4", "grid_size": "5x5"})");
  EXPECT_TRUE(a.reachable);
  EXPECT_EQ(a.path, (MovePath{Move::R, Move::R, Move::D, Move::D}));
  EXPECT_EQ(a.path_length, 4);
  EXPECT_EQ(a.grid_size, (std::pair{5, 5}));
  const auto b = parse_response(R"({"reachable": true, "path": "up, down, Left, right", "extra": 1})");
  EXPECT_EQ(b.path, (MovePath{Move::U, Move::D, Move::L, Move::R}));
  EXPECT_FALSE(b.path_length);
  const auto c = parse_response(R"({"reachable": false, "path_length": null, "path": []})");
  EXPECT_FALSE(c.reachable);
  EXPECT_TRUE(c.path->empty());
}

TEST(ParseResponse, MismatchRecordedNotRepaired) {
  const auto r = parse_response(R"({"reachable": true, "path_length": 5, "path": ["R","R"]})");
  EXPECT_TRUE(r.length_mismatch());
  EXPECT_EQ(r.path_length, 5);
}

TEST(Salvage, FindsReachability) {
  EXPECT_EQ(salvage_reachability(R"({"grid_size": [20,20], "reachable": false, "path": ["R", "D)"), false);
  EXPECT_EQ(salvage_reachability(R"("reachable":TRUE)"), true);
  EXPECT_EQ(salvage_reachability("nothing"), std::nullopt);
}

TEST(Grade, ReferenceCases) {
  const MazeGrid g30 = corridor(30);
  const auto a30 = reachable_annotation(30);
  const Verdict solved = grade(response(true, 30, a30.accepted_paths[0]), a30, g30);
  EXPECT_TRUE(solved.solved);

  const MazeGrid g40 = corridor(40);
  const auto a40 = reachable_annotation(40);
  const Verdict short_path = grade(response(true, 18, MovePath(18, Move::R)), a40, g40);
  EXPECT_FALSE(short_path.solved);
  EXPECT_TRUE(short_path.reach_correct);
  EXPECT_FALSE(*short_path.length_correct);

  const MazeGrid g = corridor(5);
  const Verdict unreach = grade(response(false, std::nullopt, std::nullopt), unreachable_annotation(), g);
  EXPECT_TRUE(unreach.solved);
  EXPECT_FALSE(unreach.length_correct);

  const auto a42 = reachable_annotation(42);
  const Verdict missed = grade(response(false, std::nullopt, std::nullopt), a42, corridor(42));
  EXPECT_FALSE(missed.solved);
  EXPECT_FALSE(missed.reach_correct);
}

TEST(Grade, UnreachableDependsOnlyOnReachAndPath) {
  const MazeGrid g = corridor(5);
  const auto a = unreachable_annotation();
  EXPECT_TRUE(grade(response(false, 99, MovePath{}), a, g).solved);
  EXPECT_FALSE(grade(response(false, std::nullopt, MovePath{Move::R}), a, g).solved);
  EXPECT_FALSE(grade(response(true, std::nullopt, std::nullopt), a, g).solved);
}

TEST(Grade, LengthInferredFromPath) {
  const auto a = reachable_annotation(4);
  const Verdict v = grade(response(true, std::nullopt, a.accepted_paths[0]), a, corridor(4));
  EXPECT_TRUE(v.solved);
  EXPECT_TRUE(v.length_inferred);
}

TEST(Grade, SimulateAcceptsUnlistedOptimalPath) {
  // 8x8 open grid: the cap keeps 50 of 3432 optimal paths.
  const MazeGrid g(8, 8, {0, 0}, {7, 7});
  const Annotation a = analyze(g);
  MovePath last(7, Move::R);
  last.insert(last.end(), 7, Move::D);
  ASSERT_EQ(std::find(a.accepted_paths.begin(), a.accepted_paths.end(), last), a.accepted_paths.end());
  const auto r = response(true, 14, last);
  EXPECT_FALSE(grade(r, a, g, GradingMode::AnnotationMatch).solved);
  EXPECT_TRUE(grade(r, a, g, GradingMode::Simulate).solved);
  // A non-optimal walk to the goal is rejected in simulate mode.
  MovePath detour{Move::R, Move::L};
  detour.insert(detour.end(), last.begin(), last.end());
  EXPECT_FALSE(grade(response(true, 16, detour), a, g, GradingMode::Simulate).solved);
}

TEST(Grade, AcceptedPathOrderIrrelevant) {
  Rng rng(4, "perm");
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    MazeSpec spec;
    spec.wall_density = 0.2;
    spec.seed = seed;
    const MazeInstance m = generate(spec);
    Annotation shuffled = m.annotation;
    rng.shuffle(std::span<MovePath>(shuffled.accepted_paths));
    for (const auto& p : m.annotation.accepted_paths) {
      const auto r = response(true, *m.annotation.shortest_len, p);
      EXPECT_EQ(grade(r, m.annotation, m.grid), grade(r, shuffled, m.grid));
    }
  }
}

TEST(Grade, UnusableNeverSolved) {
  const auto a = unreachable_annotation();
  const Verdict v = grade_unusable(false, a);
  EXPECT_FALSE(v.solved);
  EXPECT_TRUE(v.reach_correct);
  EXPECT_TRUE(v.truncated_output);
  EXPECT_FALSE(grade_unusable(std::nullopt, reachable_annotation(3)).reach_correct);
}

TEST(GradingMode, Names) {
  EXPECT_EQ(grading_mode_from_string("simulate"), GradingMode::Simulate);
  EXPECT_EQ(to_string(GradingMode::AnnotationMatch), "annotation-match");
  EXPECT_THROW(grading_mode_from_string("fuzzy"), ConfigError);
}

TEST(GraderJson, RoundTrip) {
  const SolverResponse r = parse_response(kExample);
  EXPECT_EQ(nlohmann::json(r).get<SolverResponse>(), r);
  const Verdict v = grade(r, reachable_annotation(4), corridor(4));
  EXPECT_EQ(nlohmann::json(v).get<Verdict>(), v);
}
