#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "gridmaze/grid.hpp"
#include "gridmaze/pathfinder.hpp"

namespace gridmaze {

// A solver's answer after lenient JSON extraction.
struct SolverResponse {
  std::optional<std::pair<int, int>> grid_size;
  bool start_found = false;
  bool goal_found = false;
  bool reachable = false;
  std::optional<int> path_length;
  std::optional<MovePath> path;
  std::string raw_text;

  // path_length present and different from the path's length. Recorded,
  // never repaired.
  bool length_mismatch() const noexcept {
    return path_length && path && *path_length != static_cast<int>(path->size());
  }

  friend bool operator==(const SolverResponse&, const SolverResponse&) = default;
};

// Extracts the first JSON object from `raw` (surrounding prose and code
// fences are ignored), normalizes moves to U/D/L/R and ignores unknown keys.
// `path` may be an array of move tokens or one string of letters.
// Throws ParseFailure.
SolverResponse parse_response(std::string_view raw);

// Best-effort recovery of the "reachable" flag from text that did not parse,
// e.g. output cut off by a token limit.
std::optional<bool> salvage_reachability(std::string_view raw);

enum class GradingMode : std::uint8_t { AnnotationMatch, Simulate };

std::string_view to_string(GradingMode mode) noexcept;
GradingMode grading_mode_from_string(std::string_view name);

struct Verdict {
  bool solved = false;
  bool reach_correct = false;
  // Absent when the ground truth is unreachable.
  std::optional<bool> length_correct;
  std::optional<bool> path_valid;
  GradingMode mode = GradingMode::AnnotationMatch;
  // The answer was cut off or never parsed; never solved.
  bool truncated_output = false;
  // path_length was missing and taken from the path.
  bool length_inferred = false;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// All-or-nothing scoring. Reachable ground truth: reachability, shortest
// length and path must all be right (path either equal to an accepted path,
// or simulating to the goal in exactly shortest_len moves in Simulate mode).
// Unreachable ground truth: reachable=false with no path.
Verdict grade(const SolverResponse& response, const Annotation& annotation, const MazeGrid& grid,
              GradingMode mode = GradingMode::AnnotationMatch);

// Verdict for an answer that could not be used: never solved; reachability
// is credited only if it was salvageable and correct.
Verdict grade_unusable(std::optional<bool> salvaged_reachable, const Annotation& annotation,
                       GradingMode mode = GradingMode::AnnotationMatch);

void to_json(nlohmann::json& j, const SolverResponse& r);
void from_json(const nlohmann::json& j, SolverResponse& r);
void to_json(nlohmann::json& j, const Verdict& v);
void from_json(const nlohmann::json& j, Verdict& v);

}  // namespace gridmaze
