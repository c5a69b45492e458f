#include "gridmaze/harness/adapters.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "gridmaze/encoding.hpp"
#include "gridmaze/errors.hpp"
#include "gridmaze/png.hpp"
#include "gridmaze/renderer.hpp"
#include "gridmaze/rng.hpp"
#include "gridmaze/serialization.hpp"

namespace gridmaze::harness {

using nlohmann::json;

double backoff_delay(const TransportOptions& options, int attempt, double unit_draw) {
  const double ceiling = std::min(options.backoff_cap_s, options.backoff_base_s * std::ldexp(1.0, attempt));
  return ceiling * unit_draw;
}

TokenBucket::TokenBucket(double requests_per_minute)
    : interval_s_(requests_per_minute > 0 ? 60.0 / requests_per_minute : 0.0), next_(Clock::now()) {}

void TokenBucket::acquire() {
  if (interval_s_ <= 0) return;
  Clock::time_point slot;
  {
    std::lock_guard lock(mutex_);
    const auto now = Clock::now();
    slot = std::max(now, next_);
    next_ = slot + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(interval_s_));
  }
  std::this_thread::sleep_until(slot);
}

namespace {

void default_sleep(double seconds) {
  std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

RemoteAdapter::RemoteAdapter(ProviderConfig config, TransportOptions options)
    : config_(std::move(config)), options_(std::move(options)), jitter_state_(options_.jitter_seed) {
  config_.validate();
  if (config_.adapter_kind == AdapterKind::Local) throw ConfigError(config_.label + ": local provider given to RemoteAdapter");
  if (!options_.sleep) options_.sleep = default_sleep;
  if (!config_.key_env_var.empty()) {
    const char* key = std::getenv(config_.key_env_var.c_str());
    if (key == nullptr || *key == '\0') {
      throw AuthError(config_.label + ": environment variable " + config_.key_env_var + " is not set");
    }
    api_key_ = key;
  }
  // Split "scheme://host[:port][/prefix]" so a base URL may carry a path.
  const auto scheme_end = config_.api_base.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto slash = config_.api_base.find('/', host_start);
  origin_ = config_.api_base.substr(0, slash);
  if (slash != std::string::npos) {
    path_prefix_ = config_.api_base.substr(slash);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  }
}

AdapterReply RemoteAdapter::send(const ProviderRequest& request, const ManifestEntry& /*entry*/) {
  httplib::Headers headers;
  for (const auto& [name, value] : request.headers) {
    if (name != "content-type") headers.emplace(name, value);
  }
  if (!api_key_.empty()) {
    switch (config_.adapter_kind) {
      case AdapterKind::MessagesApi:
        headers.emplace("x-api-key", api_key_);
        break;
      case AdapterKind::GeminiRest:
        headers.emplace("x-goog-api-key", api_key_);
        break;
      default:
        headers.emplace("Authorization", "Bearer " + api_key_);
        break;
    }
  }
  const std::string body = request.body.dump();
  const std::string path = path_prefix_ + request.path;
  const auto timeout = std::chrono::duration<double>(config_.timeout_s);

  std::string last_error;
  for (int attempt = 0;; ++attempt) {
    httplib::Client client(origin_);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    auto res = client.Post(path, headers, body, "application/json");

    if (res) {
      if (res->status == 401 || res->status == 403) {
        throw AuthError(config_.label + ": HTTP " + std::to_string(res->status));
      }
      if (res->status >= 200 && res->status < 300) {
        const json parsed = json::parse(res->body, nullptr, false);
        if (parsed.is_discarded()) throw TransportError(config_.label + ": reply body is not JSON");
        return parse_provider_reply(config_.adapter_kind, parsed);
      }
      last_error = "HTTP " + std::to_string(res->status);
      if (!retryable_status(res->status)) break;
    } else {
      last_error = httplib::to_string(res.error());
    }
    if (attempt >= options_.max_transport_retries) break;

    double draw = 0;
    {
      std::lock_guard lock(rng_mutex_);
      jitter_state_ = splitmix64(jitter_state_);
      draw = static_cast<double>(jitter_state_ >> 11) * 0x1.0p-53;
    }
    options_.sleep(backoff_delay(options_, attempt, draw));
  }
  throw TransportError(config_.label + ": " + last_error);
}

namespace {

MovePath l_shaped_path(const MazeGrid& grid) {
  MovePath path;
  const Position s = grid.start();
  const Position g = grid.goal();
  for (int r = s.row; r != g.row; r += (g.row > r ? 1 : -1)) path.push_back(g.row > r ? Move::D : Move::U);
  for (int c = s.col; c != g.col; c += (g.col > c ? 1 : -1)) path.push_back(g.col > c ? Move::R : Move::L);
  return path;
}

std::optional<MovePath> random_walk(const MazeGrid& grid, std::uint64_t seed) {
  Rng rng(seed, "random-walk");
  Position pos = grid.start();
  MovePath path;
  const int budget = 4 * grid.rows() * grid.cols();
  for (int i = 0; i < budget && pos != grid.goal(); ++i) {
    const Move m = kMoveOrder[rng.below(kMoveOrder.size())];
    if (const auto next = try_move(grid, pos, m); next && grid.passable(*next)) {
      pos = *next;
      path.push_back(m);
    }
  }
  if (pos != grid.goal()) return std::nullopt;
  return path;
}

json answer(const MazeGrid& grid, bool reachable, const std::optional<MovePath>& path) {
  json a{{"grid_size", {grid.rows(), grid.cols()}},
         {"start_found", true},
         {"goal_found", true},
         {"reachable", reachable},
         {"path_length", nullptr},
         {"path", json::array()}};
  if (reachable && path) {
    a["path_length"] = path->size();
    a["path"] = *path;
  }
  return a;
}

MazeGrid grid_from_request(const ProviderRequest& request, const ManifestEntry& entry) {
  if (request.input_mode == InputMode::TextGrid) {
    const auto open = request.prompt.find("```\n");
    const auto close = request.prompt.rfind("\n```");
    if (open == std::string::npos || close == std::string::npos || close < open + 4) {
      throw TransportError("text-grid request has no embedded grid");
    }
    return parse_text_grid(request.prompt.substr(open + 4, close - open - 4));
  }
  const std::string url = request.body.value("image_url", std::string{});
  if (url.rfind(kPngDataUrlPrefix, 0) != 0) throw TransportError("image request has no PNG data URL");
  const auto png = base64_decode(std::string_view(url).substr(kPngDataUrlPrefix.size()));
  return read_back_grid(decode_png(png), entry.grid.rows(), entry.grid.cols(), entry.spec.palette);
}

}  // namespace

LocalAdapter::LocalAdapter(ProviderConfig config) : config_(std::move(config)) {
  config_.validate();
  const auto& m = config_.model_id;
  if (m != "oracle" && m != "readback" && m != "naive" && m != "random-walk") {
    throw ConfigError(config_.label + ": unknown local solver '" + m + "'");
  }
}

AdapterReply LocalAdapter::send(const ProviderRequest& request, const ManifestEntry& entry) {
  const auto& grid = entry.grid;
  json a;
  if (config_.model_id == "oracle") {
    const auto& ann = entry.annotation;
    a = answer(grid, ann.reachable,
               ann.accepted_paths.empty() ? std::nullopt : std::optional<MovePath>(ann.accepted_paths.front()));
  } else if (config_.model_id == "readback") {
    const MazeGrid seen = grid_from_request(request, entry);
    const Annotation ann = analyze(seen);
    a = answer(seen, ann.reachable,
               ann.accepted_paths.empty() ? std::nullopt : std::optional<MovePath>(ann.accepted_paths.front()));
  } else if (config_.model_id == "naive") {
    a = answer(grid, true, l_shaped_path(grid));
  } else {
    const auto walk = random_walk(grid, fnv1a64(entry.maze_id));
    a = answer(grid, walk.has_value(), walk);
  }
  AdapterReply reply;
  reply.text = a.dump();
  return reply;
}

std::unique_ptr<Adapter> make_adapter(const ProviderConfig& config, const TransportOptions& options) {
  if (config.adapter_kind == AdapterKind::Local) return std::make_unique<LocalAdapter>(config);
  return std::make_unique<RemoteAdapter>(config, options);
}

}  // namespace gridmaze::harness
