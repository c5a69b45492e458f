#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridmaze/dataset.hpp"
#include "gridmaze/harness/eval.hpp"

namespace gridmaze::report {

using harness::InputMode;
using harness::PromptVariant;
using harness::RunReport;

// Core = groups A-H, UltraHard = group X.
enum class Scope : std::uint8_t { Core, UltraHard, All };
enum class TableKind : std::uint8_t { Leaderboard, PerGroup, Efficiency, UltraHard, Ablation };
enum class Format : std::uint8_t { Markdown, Csv, Json };

std::string_view to_string(Scope v) noexcept;
std::string_view to_string(TableKind v) noexcept;
std::string_view to_string(Format v) noexcept;
// Throw ConfigError on unknown names.
Scope scope_from_string(std::string_view s);
TableKind table_kind_from_string(std::string_view s);
Format format_from_string(std::string_view s);

bool in_scope(char group_id, Scope scope) noexcept;

struct MetricsRow {
  std::string label;
  std::string reasoning;
  InputMode input_mode = InputMode::Image;
  PromptVariant prompt_variant = PromptVariant::Standard;
  int solved = 0;
  int total = 0;
  int reach_correct = 0;
  int unreachable_total = 0;
  int false_positives = 0;
  // Percentages in [0, 100].
  double reach_accuracy = 0.0;
  std::optional<double> false_positive_rate;
  double avg_latency_s = 0.0;
  double median_latency_s = 0.0;
  std::int64_t input_tokens = 0;
  // thinking + output, the efficiency numerator.
  std::int64_t total_tokens = 0;
  std::optional<double> tokens_per_solve;
  std::map<char, int> per_group_solves;
  std::map<char, int> per_group_totals;
};

// Present iff solved > 0.
std::optional<double> tokens_per_solve(std::int64_t total_tokens, int solved) noexcept;
// Percentage of unreachable mazes claimed reachable; absent when there are none.
std::optional<double> false_positive_rate(int false_positives, int unreachable_total) noexcept;

// One row per (provider label, input mode, prompt variant) across all runs.
// Throws InconsistentReport when a trial names a maze missing from the
// manifest, disagrees with it on the group, or is duplicated.
std::vector<MetricsRow> compute_metrics(const std::vector<RunReport>& runs, const Manifest& manifest,
                                        Scope scope = Scope::Core);
std::vector<MetricsRow> compute_metrics(const RunReport& run, const Manifest& manifest, Scope scope = Scope::Core);

// Per-maze line of the ultra-hard table.
struct UltraHardRow {
  std::string maze_id;
  std::string provider;
  bool gt_reachable = false;
  std::optional<int> gt_length;
  // Absent when the answer was unusable and nothing could be salvaged.
  std::optional<bool> pred_reachable;
  std::optional<int> pred_length;
  bool solved = false;
  // Correct reachability but no usable answer (e.g. output cut off).
  bool partial = false;
  double latency_s = 0.0;
};

std::vector<UltraHardRow> ultra_hard_rows(const std::vector<RunReport>& runs, const Manifest& manifest);

// Display helpers shared by all formats.
std::string format_rounded(double v);
std::string format_latency(double seconds);
std::string format_optional(const std::optional<double>& v);

// Renders a table of metrics. Output is deterministic for equal input.
std::string emit_table(const std::vector<MetricsRow>& rows, TableKind kind, Format format);
std::string emit_ultra_hard(const std::vector<UltraHardRow>& rows, Format format);

nlohmann::json to_json_value(const MetricsRow& row);

}  // namespace gridmaze::report
