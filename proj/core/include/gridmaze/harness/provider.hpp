#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridmaze/dataset.hpp"

namespace gridmaze::harness {

enum class AdapterKind : std::uint8_t { ResponsesApi, MessagesApi, GeminiRest, DashScope, Local };
enum class Reasoning : std::uint8_t { None, Low, Medium, Default };
enum class InputMode : std::uint8_t { Image, TextGrid };
enum class PromptVariant : std::uint8_t { Standard, VisualIntuition };

std::string_view to_string(AdapterKind v) noexcept;
std::string_view to_string(Reasoning v) noexcept;
std::string_view to_string(InputMode v) noexcept;
std::string_view to_string(PromptVariant v) noexcept;
// All throw ConfigError on unknown names.
AdapterKind adapter_kind_from_string(std::string_view s);
Reasoning reasoning_from_string(std::string_view s);
InputMode input_mode_from_string(std::string_view s);
PromptVariant prompt_variant_from_string(std::string_view s);

inline constexpr int kDefaultMaxOutputTokens = 8192;
inline constexpr std::string_view kAnthropicVersion = "2023-06-01";

struct ProviderConfig {
  // Row label in reports, e.g. "gpt-5.4 (low)".
  std::string label;
  AdapterKind adapter_kind = AdapterKind::Local;
  std::string model_id;
  Reasoning reasoning = Reasoning::None;
  int max_output_tokens = kDefaultMaxOutputTokens;
  // Requested temperature; see effective_temperature() for what is sent.
  std::optional<double> temperature;
  std::string api_base;
  // Environment variable holding the API key; empty means no auth header.
  std::string key_env_var;
  // Thinking budgets for messages-api; provider-documented, not fixed here.
  int thinking_budget_low = 1024;
  int thinking_budget_medium = 4096;
  double timeout_s = 300.0;
  // 0 disables rate limiting.
  double requests_per_minute = 0.0;

  // Throws ConfigError or UnsupportedCombination.
  void validate() const;
};

// Temperature actually placed in the request: 1.0 for messages-api with
// thinking, 0.0 for configurations without reasoning, and nothing for
// providers that reason by default or use effort controls.
std::optional<double> effective_temperature(const ProviderConfig& config);

void to_json(nlohmann::json& j, const ProviderConfig& c);
void from_json(const nlohmann::json& j, ProviderConfig& c);

// Accepts either an array of providers or {"providers": [...]}.
std::vector<ProviderConfig> load_providers(const std::string& path);

inline constexpr std::string_view kPromptVersion = "gridmaze-prompt-v1";
inline constexpr std::string_view kNoToolsClause =
    "Do not use any external tools, code, search, calculators, or graph-search programs.";
inline constexpr std::string_view kVisualIntuitionClause =
    "Do NOT convert the maze into a text grid, matrix, or row/column representation. Do NOT "
    "perform step-by-step BFS, DFS, or any graph-search algorithm in text. Instead, solve this "
    "the way a human would: look at the image, visually trace the walkable path.";

// Full user prompt. `text_grid` is embedded only in TextGrid mode.
std::string build_prompt(InputMode mode, PromptVariant variant, std::string_view text_grid = {});

inline constexpr std::string_view kPngDataUrlPrefix = "data:image/png;base64,";

// What an adapter sends: endpoint path, non-secret headers and JSON body.
// Credentials are attached by the transport at send time.
struct ProviderRequest {
  AdapterKind kind = AdapterKind::Local;
  std::string path;
  std::vector<std::pair<std::string, std::string>> headers;
  nlohmann::json body;
  std::string prompt;
  InputMode input_mode = InputMode::Image;
};

// Throws UnsupportedCombination (e.g. an effort level on an adapter that has
// no effort control) and ConfigError (image mode without image bytes).
ProviderRequest build_request(const ManifestEntry& entry, const ProviderConfig& provider,
                              InputMode mode, PromptVariant variant,
                              std::span<const std::uint8_t> png = {});

struct TokenUsage {
  std::int64_t input = 0;
  std::int64_t thinking = 0;
  std::int64_t output = 0;

  std::int64_t total() const noexcept { return input + thinking + output; }
  TokenUsage& operator+=(const TokenUsage& o) noexcept {
    input += o.input;
    thinking += o.thinking;
    output += o.output;
    return *this;
  }
  friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

struct AdapterReply {
  std::string text;
  TokenUsage usage;
  // The provider stopped at the output token limit.
  bool truncated = false;
  // Usage fields that were missing and recorded as zero.
  std::vector<std::string> warnings;
};

// Extracts answer text, token usage and truncation from a provider's JSON
// response body. Throws TransportError when the body has no usable answer
// structure at all.
AdapterReply parse_provider_reply(AdapterKind kind, const nlohmann::json& body);

}  // namespace gridmaze::harness
