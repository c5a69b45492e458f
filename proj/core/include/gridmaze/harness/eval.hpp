#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridmaze/dataset.hpp"
#include "gridmaze/grader.hpp"
#include "gridmaze/harness/adapters.hpp"
#include "gridmaze/harness/provider.hpp"

namespace gridmaze::harness {

// Initial call plus up to two retries after unparseable answers.
inline constexpr int kMaxAttempts = 3;

struct TrialRecord {
  std::string maze_id;
  char group_id = 'A';
  std::string provider;
  InputMode input_mode = InputMode::Image;
  PromptVariant prompt_variant = PromptVariant::Standard;
  int attempts = 0;
  double latency_s = 0.0;
  TokenUsage tokens;
  // Absent when no attempt produced a parseable answer.
  std::optional<SolverResponse> response;
  // Why the response is absent, e.g. "parse: ..." or "transport: ...".
  std::string failure;
  // The last attempt stopped at the output token limit.
  bool output_truncated = false;
  // Reachability recovered from an unusable answer, if any.
  std::optional<bool> salvaged_reachable;
  Verdict verdict;
  std::vector<std::string> warnings;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct RunMetadata {
  std::string timestamp;
  std::string config_digest;
  std::string manifest_digest;
  std::string prompt_version;
  InputMode input_mode = InputMode::Image;
  PromptVariant prompt_variant = PromptVariant::Standard;
  GradingMode grading_mode = GradingMode::AnnotationMatch;
  std::string groups;

  friend bool operator==(const RunMetadata&, const RunMetadata&) = default;
};

struct RunReport {
  RunMetadata metadata;
  std::vector<ProviderConfig> providers;
  // Sorted by (maze_id, provider).
  std::vector<TrialRecord> trials;
};

// Returns seconds on some monotonic scale; one instance per trial.
using TrialClock = std::function<double()>;

struct RunOptions {
  InputMode input_mode = InputMode::Image;
  PromptVariant prompt_variant = PromptVariant::Standard;
  GradingMode grading_mode = GradingMode::AnnotationMatch;
  // Group letters to evaluate; empty means all.
  std::string groups;
  int concurrency = 4;
  // Directory the manifest's image paths are relative to. Images missing
  // there are rendered in memory.
  std::filesystem::path image_root;
  TransportOptions transport;
  std::function<TrialClock()> clock_factory;
  std::function<std::string()> timestamp;
  std::function<std::unique_ptr<Adapter>(const ProviderConfig&)> adapter_factory;
};

// PNG bytes for an entry: the file under `image_root` if present, otherwise
// a fresh render.
std::vector<std::uint8_t> load_entry_image(const ManifestEntry& entry, const std::filesystem::path& image_root);

// One (maze, provider) trial. Unparseable answers are retried up to twice;
// latency and tokens are summed over all attempts. Transport failures are
// recorded in the trial. Throws AuthError and configuration errors.
TrialRecord solve_one(Adapter& adapter, const ProviderConfig& provider, const ManifestEntry& entry,
                      const ProviderRequest& request, GradingMode grading_mode, const TrialClock& clock,
                      TokenBucket* rate_limit = nullptr);

// Evaluates every selected entry against every provider with bounded
// parallelism. Throws ConfigError, UnsupportedCombination and AuthError.
RunReport run_eval(const Manifest& manifest, const std::vector<ProviderConfig>& providers,
                   const RunOptions& options);

void to_json(nlohmann::json& j, const TrialRecord& t);
void from_json(const nlohmann::json& j, TrialRecord& t);
nlohmann::json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);
void write_report(const RunReport& report, const std::filesystem::path& path);
RunReport load_report(const std::filesystem::path& path);

std::string manifest_digest(const Manifest& manifest);

}  // namespace gridmaze::harness
