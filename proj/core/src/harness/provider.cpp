#include "gridmaze/harness/provider.hpp"

#include <fstream>

#include "gridmaze/encoding.hpp"
#include "gridmaze/errors.hpp"

namespace gridmaze::harness {

using nlohmann::json;

namespace {

template <typename E, std::size_t N>
E lookup(std::string_view s, const std::pair<E, std::string_view> (&table)[N], std::string_view what) {
  for (const auto& [value, name] : table) {
    if (name == s) return value;
  }
  throw ConfigError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

template <typename E, std::size_t N>
std::string_view name_of(E v, const std::pair<E, std::string_view> (&table)[N]) noexcept {
  for (const auto& [value, name] : table) {
    if (value == v) return name;
  }
  return "?";
}

constexpr std::pair<AdapterKind, std::string_view> kAdapterNames[] = {
    {AdapterKind::ResponsesApi, "responses-api"}, {AdapterKind::MessagesApi, "messages-api"},
    {AdapterKind::GeminiRest, "gemini-rest"},     {AdapterKind::DashScope, "dashscope"},
    {AdapterKind::Local, "local"}};
constexpr std::pair<Reasoning, std::string_view> kReasoningNames[] = {
    {Reasoning::None, "none"}, {Reasoning::Low, "low"}, {Reasoning::Medium, "medium"}, {Reasoning::Default, "default"}};
constexpr std::pair<InputMode, std::string_view> kInputModeNames[] = {{InputMode::Image, "image"},
                                                                      {InputMode::TextGrid, "text-grid"}};
constexpr std::pair<PromptVariant, std::string_view> kVariantNames[] = {
    {PromptVariant::Standard, "standard"}, {PromptVariant::VisualIntuition, "visual-intuition"}};

bool is_remote(AdapterKind kind) { return kind != AdapterKind::Local; }

bool thinking_enabled(const ProviderConfig& c) {
  return c.adapter_kind == AdapterKind::MessagesApi &&
         (c.reasoning == Reasoning::Low || c.reasoning == Reasoning::Medium);
}

int thinking_budget(const ProviderConfig& c) {
  return c.reasoning == Reasoning::Medium ? c.thinking_budget_medium : c.thinking_budget_low;
}

std::int64_t usage_field(const json& obj, const char* key, const char* label, std::vector<std::string>& warnings) {
  if (obj.is_object() && obj.contains(key) && obj[key].is_number_integer()) return obj[key].get<std::int64_t>();
  warnings.push_back(std::string("missing usage field ") + label + "; recorded as 0");
  return 0;
}

}  // namespace

std::string_view to_string(AdapterKind v) noexcept { return name_of(v, kAdapterNames); }
std::string_view to_string(Reasoning v) noexcept { return name_of(v, kReasoningNames); }
std::string_view to_string(InputMode v) noexcept { return name_of(v, kInputModeNames); }
std::string_view to_string(PromptVariant v) noexcept { return name_of(v, kVariantNames); }
AdapterKind adapter_kind_from_string(std::string_view s) { return lookup(s, kAdapterNames, "adapter kind"); }
Reasoning reasoning_from_string(std::string_view s) { return lookup(s, kReasoningNames, "reasoning level"); }
InputMode input_mode_from_string(std::string_view s) { return lookup(s, kInputModeNames, "input mode"); }
PromptVariant prompt_variant_from_string(std::string_view s) { return lookup(s, kVariantNames, "prompt variant"); }

std::optional<double> effective_temperature(const ProviderConfig& c) {
  if (thinking_enabled(c)) return 1.0;
  if (c.reasoning == Reasoning::None) return 0.0;
  return c.temperature;
}

void ProviderConfig::validate() const {
  if (label.empty()) throw ConfigError("provider label is empty");
  if (model_id.empty()) throw ConfigError(label + ": model_id is empty");
  if (max_output_tokens <= 0) throw ConfigError(label + ": max_output_tokens must be positive");
  if (is_remote(adapter_kind) && api_base.empty()) throw ConfigError(label + ": api_base is required");
  if (timeout_s <= 0) throw ConfigError(label + ": timeout_s must be positive");

  const auto unsupported = [&](std::string_view why) {
    return UnsupportedCombination(label + ": reasoning=" + std::string(to_string(reasoning)) + " on " +
                                  std::string(to_string(adapter_kind)) + " " + std::string(why));
  };
  switch (adapter_kind) {
    case AdapterKind::ResponsesApi:
      break;
    case AdapterKind::MessagesApi:
      if (thinking_enabled(*this)) {
        const int budget = thinking_budget(*this);
        if (budget < 1024 || budget >= max_output_tokens) {
          throw unsupported("needs 1024 <= thinking budget < max_output_tokens");
        }
      }
      break;
    case AdapterKind::GeminiRest:
    case AdapterKind::DashScope:
      if (reasoning != Reasoning::Default) throw unsupported("(this adapter only runs its default reasoning)");
      break;
    case AdapterKind::Local:
      if (reasoning != Reasoning::None && reasoning != Reasoning::Default) {
        throw unsupported("(local solvers have no reasoning control)");
      }
      break;
  }

  if (temperature) {
    const bool forced = thinking_enabled(*this) || reasoning == Reasoning::None;
    if (forced && *effective_temperature(*this) != *temperature) {
      throw ConfigError(label + ": temperature " + std::to_string(*temperature) +
                        " conflicts with the required " + std::to_string(*effective_temperature(*this)));
    }
  }
}

void to_json(json& j, const ProviderConfig& c) {
  j = json{{"label", c.label},
           {"adapter_kind", to_string(c.adapter_kind)},
           {"model_id", c.model_id},
           {"reasoning", to_string(c.reasoning)},
           {"max_output_tokens", c.max_output_tokens},
           {"temperature", nullptr},
           {"api_base", c.api_base},
           {"key_env_var", c.key_env_var},
           {"thinking_budget_low", c.thinking_budget_low},
           {"thinking_budget_medium", c.thinking_budget_medium},
           {"timeout_s", c.timeout_s},
           {"requests_per_minute", c.requests_per_minute}};
  if (c.temperature) j["temperature"] = *c.temperature;
}

void from_json(const json& j, ProviderConfig& c) {
  c = ProviderConfig{};
  c.label = j.at("label").get<std::string>();
  c.adapter_kind = adapter_kind_from_string(j.at("adapter_kind").get<std::string>());
  c.model_id = j.at("model_id").get<std::string>();
  c.reasoning = reasoning_from_string(j.value("reasoning", std::string("none")));
  c.max_output_tokens = j.value("max_output_tokens", kDefaultMaxOutputTokens);
  if (j.contains("temperature") && !j["temperature"].is_null()) c.temperature = j["temperature"].get<double>();
  c.api_base = j.value("api_base", std::string{});
  c.key_env_var = j.value("key_env_var", std::string{});
  c.thinking_budget_low = j.value("thinking_budget_low", c.thinking_budget_low);
  c.thinking_budget_medium = j.value("thinking_budget_medium", c.thinking_budget_medium);
  c.timeout_s = j.value("timeout_s", c.timeout_s);
  c.requests_per_minute = j.value("requests_per_minute", c.requests_per_minute);
}

std::vector<ProviderConfig> load_providers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open providers file " + path);
  try {
    json j;
    in >> j;
    const json& list = j.is_object() ? j.at("providers") : j;
    auto providers = list.get<std::vector<ProviderConfig>>();
    for (const auto& p : providers) p.validate();
    return providers;
  } catch (const json::exception& ex) {
    throw ConfigError(path + ": " + ex.what());
  }
}

std::string build_prompt(InputMode mode, PromptVariant variant, std::string_view text_grid) {
  std::string p;
  if (mode == InputMode::Image) {
    p += "The image shows a pixel-art maze drawn on a square grid of tiles. The player character marks "
         "the start cell and the treasure chest marks the goal cell. Walls and traps (hazard tiles) are "
         "impassable; every other tile is open floor.\n";
  } else {
    p += "The maze below is given as a text grid, one line per row: S = start, G = goal, . = open floor, "
         "# = wall, T = trap. Walls and traps are impassable.\n";
  }
  p += "You move one cell at a time: U (up), D (down), L (left), R (right). Diagonal moves are not "
       "allowed.\n\n"
       "Determine the grid size, whether the start and goal are present, whether the goal can be reached "
       "from the start, and if so the length of the shortest path and one shortest path.\n\n";
  p += kNoToolsClause;
  p += '\n';
  if (variant == PromptVariant::VisualIntuition) {
    p += kVisualIntuitionClause;
    p += '\n';
  }
  p += "\nRespond with a single JSON object and nothing else, using exactly these keys:\n"
       "{\"grid_size\": [rows, cols], \"start_found\": true, \"goal_found\": true, \"reachable\": true, "
       "\"path_length\": 4, \"path\": [\"R\", \"R\", \"D\", \"D\"]}\n"
       "If the goal cannot be reached, set \"reachable\" to false, \"path_length\" to null and \"path\" to [].";
  if (mode == InputMode::TextGrid) {
    p += "\n\nMaze:\n```\n";
    p += text_grid;
    p += "\n```";
  }
  return p;
}

ProviderRequest build_request(const ManifestEntry& entry, const ProviderConfig& provider, InputMode mode,
                              PromptVariant variant, std::span<const std::uint8_t> png) {
  provider.validate();
  ProviderRequest req;
  req.kind = provider.adapter_kind;
  req.input_mode = mode;
  const std::string grid_text = mode == InputMode::TextGrid ? export_text_grid(entry.grid) : std::string{};
  req.prompt = build_prompt(mode, variant, grid_text);

  std::string b64;
  if (mode == InputMode::Image) {
    if (png.empty()) throw ConfigError(entry.maze_id + ": image mode needs the rendered PNG");
    b64 = base64_encode(png);
  }
  const std::string data_url = std::string(kPngDataUrlPrefix) + b64;
  const auto temperature = effective_temperature(provider);
  req.headers.emplace_back("content-type", "application/json");

  switch (provider.adapter_kind) {
    case AdapterKind::ResponsesApi: {
      json content = json::array({{{"type", "input_text"}, {"text", req.prompt}}});
      if (mode == InputMode::Image) content.push_back({{"type", "input_image"}, {"image_url", data_url}});
      req.path = "/v1/responses";
      req.body = {{"model", provider.model_id},
                  {"input", json::array({{{"role", "user"}, {"content", content}}})},
                  {"max_output_tokens", provider.max_output_tokens}};
      if (provider.reasoning != Reasoning::Default) {
        req.body["reasoning"] = {{"effort", to_string(provider.reasoning)}};
      }
      break;
    }
    case AdapterKind::MessagesApi: {
      json content = json::array();
      if (mode == InputMode::Image) {
        content.push_back({{"type", "image"},
                           {"source", {{"type", "base64"}, {"media_type", "image/png"}, {"data", b64}}}});
      }
      content.push_back({{"type", "text"}, {"text", req.prompt}});
      req.path = "/v1/messages";
      req.headers.emplace_back("anthropic-version", std::string(kAnthropicVersion));
      req.body = {{"model", provider.model_id},
                  {"max_tokens", provider.max_output_tokens},
                  {"messages", json::array({{{"role", "user"}, {"content", content}}})}};
      if (thinking_enabled(provider)) {
        req.body["thinking"] = {{"type", "enabled"}, {"budget_tokens", thinking_budget(provider)}};
      }
      break;
    }
    case AdapterKind::GeminiRest: {
      json parts = json::array({{{"text", req.prompt}}});
      if (mode == InputMode::Image) {
        parts.push_back({{"inline_data", {{"mime_type", "image/png"}, {"data", b64}}}});
      }
      req.path = "/v1beta/models/" + provider.model_id + ":generateContent";
      req.body = {{"contents", json::array({{{"role", "user"}, {"parts", parts}}})},
                  {"generationConfig", {{"maxOutputTokens", provider.max_output_tokens}}}};
      if (temperature) req.body["generationConfig"]["temperature"] = *temperature;
      break;
    }
    case AdapterKind::DashScope: {
      json content = json::array();
      if (mode == InputMode::Image) content.push_back({{"type", "image_url"}, {"image_url", {{"url", data_url}}}});
      content.push_back({{"type", "text"}, {"text", req.prompt}});
      req.path = "/compatible-mode/v1/chat/completions";
      req.body = {{"model", provider.model_id},
                  {"messages", json::array({{{"role", "user"}, {"content", content}}})},
                  {"max_tokens", provider.max_output_tokens}};
      break;
    }
    case AdapterKind::Local: {
      req.body = {{"model", provider.model_id}, {"prompt", req.prompt}, {"maze_id", entry.maze_id}};
      if (mode == InputMode::Image) req.body["image_url"] = data_url;
      break;
    }
  }
  if (temperature && provider.adapter_kind != AdapterKind::GeminiRest) req.body["temperature"] = *temperature;
  return req;
}

AdapterReply parse_provider_reply(AdapterKind kind, const json& body) {
  AdapterReply reply;
  if (!body.is_object()) throw TransportError("provider reply is not a JSON object");
  try {
    switch (kind) {
      case AdapterKind::ResponsesApi: {
        for (const auto& item : body.at("output")) {
          if (item.value("type", "") != "message") continue;
          for (const auto& part : item.at("content")) {
            if (part.value("type", "") == "output_text") reply.text += part.at("text").get<std::string>();
          }
        }
        reply.truncated = body.value("status", "") == "incomplete";
        const json usage = body.value("usage", json::object());
        reply.usage.input = usage_field(usage, "input_tokens", "input_tokens", reply.warnings);
        const std::int64_t out = usage_field(usage, "output_tokens", "output_tokens", reply.warnings);
        reply.usage.thinking = usage_field(usage.value("output_tokens_details", json::object()), "reasoning_tokens",
                                           "output_tokens_details.reasoning_tokens", reply.warnings);
        reply.usage.output = std::max<std::int64_t>(0, out - reply.usage.thinking);
        break;
      }
      case AdapterKind::MessagesApi: {
        for (const auto& block : body.at("content")) {
          if (block.value("type", "") == "text") reply.text += block.at("text").get<std::string>();
        }
        reply.truncated = body.value("stop_reason", "") == "max_tokens";
        const json usage = body.value("usage", json::object());
        reply.usage.input = usage_field(usage, "input_tokens", "input_tokens", reply.warnings);
        // Thinking tokens are billed inside output_tokens and not broken out.
        reply.usage.output = usage_field(usage, "output_tokens", "output_tokens", reply.warnings);
        break;
      }
      case AdapterKind::GeminiRest: {
        const auto& cand = body.at("candidates").at(0);
        if (cand.contains("content") && cand["content"].contains("parts")) {
          for (const auto& part : cand["content"]["parts"]) {
            if (part.value("thought", false)) continue;
            if (part.contains("text")) reply.text += part["text"].get<std::string>();
          }
        }
        reply.truncated = cand.value("finishReason", "") == "MAX_TOKENS";
        const json usage = body.value("usageMetadata", json::object());
        reply.usage.input = usage_field(usage, "promptTokenCount", "promptTokenCount", reply.warnings);
        reply.usage.output = usage_field(usage, "candidatesTokenCount", "candidatesTokenCount", reply.warnings);
        reply.usage.thinking = usage_field(usage, "thoughtsTokenCount", "thoughtsTokenCount", reply.warnings);
        break;
      }
      case AdapterKind::DashScope: {
        const auto& choice = body.at("choices").at(0);
        const auto& content = choice.at("message").at("content");
        if (content.is_string()) reply.text = content.get<std::string>();
        reply.truncated = choice.value("finish_reason", "") == "length";
        const json usage = body.value("usage", json::object());
        reply.usage.input = usage_field(usage, "prompt_tokens", "prompt_tokens", reply.warnings);
        const std::int64_t completion = usage_field(usage, "completion_tokens", "completion_tokens", reply.warnings);
        reply.usage.thinking = usage_field(usage.value("completion_tokens_details", json::object()), "reasoning_tokens",
                                           "completion_tokens_details.reasoning_tokens", reply.warnings);
        reply.usage.output = std::max<std::int64_t>(0, completion - reply.usage.thinking);
        break;
      }
      case AdapterKind::Local: {
        reply.text = body.at("text").get<std::string>();
        const json usage = body.value("usage", json::object());
        reply.usage.input = usage.value("input", 0);
        reply.usage.thinking = usage.value("thinking", 0);
        reply.usage.output = usage.value("output", 0);
        break;
      }
    }
  } catch (const json::exception& ex) {
    throw TransportError(std::string(to_string(kind)) + " reply has an unexpected shape: " + ex.what());
  }
  return reply;
}

}  // namespace gridmaze::harness
