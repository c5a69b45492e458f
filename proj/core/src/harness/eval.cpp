#include "gridmaze/harness/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iterator>
#include <map>
#include <mutex>
#include <thread>

#include "gridmaze/encoding.hpp"
#include "gridmaze/errors.hpp"
#include "gridmaze/renderer.hpp"
#include "gridmaze/serialization.hpp"

namespace gridmaze::harness {

using nlohmann::json;

std::vector<std::uint8_t> load_entry_image(const ManifestEntry& entry, const std::filesystem::path& image_root) {
  if (!image_root.empty()) {
    std::ifstream in(image_root / entry.image_path, std::ios::binary);
    if (in) return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }
  return render_png(entry.grid, entry.spec.palette, entry.spec.seed);
}

TrialRecord solve_one(Adapter& adapter, const ProviderConfig& provider, const ManifestEntry& entry,
                      const ProviderRequest& request, GradingMode grading_mode, const TrialClock& clock,
                      TokenBucket* rate_limit) {
  TrialRecord t;
  t.maze_id = entry.maze_id;
  t.group_id = entry.group_id;
  t.provider = provider.label;
  t.input_mode = request.input_mode;

  std::string last_text;
  while (t.attempts < kMaxAttempts) {
    if (rate_limit != nullptr) rate_limit->acquire();
    ++t.attempts;
    const double begin = clock();
    AdapterReply reply;
    try {
      reply = adapter.send(request, entry);
    } catch (const TransportError& ex) {
      t.latency_s += clock() - begin;
      t.failure = std::string("transport: ") + ex.what();
      t.verdict = grade_unusable(std::nullopt, entry.annotation, grading_mode);
      return t;
    }
    t.latency_s += clock() - begin;
    t.tokens += reply.usage;
    t.output_truncated = reply.truncated;
    for (auto& w : reply.warnings) {
      if (std::find(t.warnings.begin(), t.warnings.end(), w) == t.warnings.end()) t.warnings.push_back(std::move(w));
    }
    last_text = std::move(reply.text);
    try {
      t.response = parse_response(last_text);
      t.failure.clear();
      if (reply.truncated) {
        // An answer cut off at the token limit is never credited as solved,
        // even when a complete-looking object was found in the prefix.
        t.verdict = grade_unusable(t.response->reachable, entry.annotation, grading_mode);
      } else {
        t.verdict = grade(*t.response, entry.annotation, entry.grid, grading_mode);
      }
      return t;
    } catch (const ParseFailure& ex) {
      t.failure = std::string("parse: ") + ex.what();
    }
  }
  t.salvaged_reachable = salvage_reachability(last_text);
  t.verdict = grade_unusable(t.salvaged_reachable, entry.annotation, grading_mode);
  return t;
}

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

TrialClock steady_clock_seconds() {
  return [] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
  };
}

std::string config_digest(const std::vector<ProviderConfig>& providers, const RunOptions& o) {
  const json j{{"providers", providers},
               {"prompt_version", kPromptVersion},
               {"input_mode", to_string(o.input_mode)},
               {"prompt_variant", to_string(o.prompt_variant)},
               {"grading_mode", to_string(o.grading_mode)},
               {"groups", o.groups}};
  return sha256_hex(j.dump());
}

// Fatal errors stop the run; everything else is recorded per trial.
bool is_fatal(const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const AuthError&) {
    return true;
  } catch (const UnsupportedCombination&) {
    return true;
  } catch (const ConfigError&) {
    return true;
  } catch (...) {
    return false;
  }
}

}  // namespace

std::string manifest_digest(const Manifest& manifest) { return sha256_hex(manifest_to_json(manifest).dump()); }

RunReport run_eval(const Manifest& manifest, const std::vector<ProviderConfig>& providers,
                   const RunOptions& options) {
  if (providers.empty()) throw ConfigError("no providers configured");
  for (const auto& p : providers) p.validate();
  for (std::size_t i = 0; i < providers.size(); ++i) {
    for (std::size_t k = i + 1; k < providers.size(); ++k) {
      if (providers[i].label == providers[k].label) throw ConfigError("duplicate provider label " + providers[i].label);
    }
  }
  if (options.concurrency < 1) throw ConfigError("concurrency must be at least 1");

  std::vector<const ManifestEntry*> entries;
  for (const auto& e : manifest.entries) {
    if (options.groups.empty() || options.groups.find(e.group_id) != std::string::npos) entries.push_back(&e);
  }

  std::vector<std::unique_ptr<Adapter>> adapters;
  std::vector<std::unique_ptr<TokenBucket>> buckets;
  for (const auto& p : providers) {
    adapters.push_back(options.adapter_factory ? options.adapter_factory(p) : make_adapter(p, options.transport));
    buckets.push_back(std::make_unique<TokenBucket>(p.requests_per_minute));
  }

  std::vector<std::vector<std::uint8_t>> images(entries.size());
  std::vector<std::once_flag> image_once(entries.size());

  const std::size_t jobs = entries.size() * providers.size();
  std::vector<TrialRecord> trials(jobs);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex error_mutex;
  std::exception_ptr fatal;

  const auto worker = [&] {
    while (!stop) {
      const std::size_t job = next++;
      if (job >= jobs) return;
      const std::size_t ei = job / providers.size();
      const std::size_t pi = job % providers.size();
      const ManifestEntry& entry = *entries[ei];
      try {
        std::span<const std::uint8_t> png;
        if (options.input_mode == InputMode::Image) {
          std::call_once(image_once[ei], [&] { images[ei] = load_entry_image(entry, options.image_root); });
          png = images[ei];
        }
        const auto request = build_request(entry, providers[pi], options.input_mode, options.prompt_variant, png);
        const TrialClock clock = options.clock_factory ? options.clock_factory() : steady_clock_seconds();
        TrialRecord t = solve_one(*adapters[pi], providers[pi], entry, request, options.grading_mode, clock,
                                  buckets[pi].get());
        t.prompt_variant = options.prompt_variant;
        trials[job] = std::move(t);
      } catch (...) {
        auto ep = std::current_exception();
        if (is_fatal(ep)) {
          std::lock_guard lock(error_mutex);
          if (!fatal) fatal = ep;
          stop = true;
          return;
        }
        // Anything else (e.g. an unreadable image) is recorded, not fatal.
        TrialRecord t;
        t.maze_id = entry.maze_id;
        t.group_id = entry.group_id;
        t.provider = providers[pi].label;
        t.input_mode = options.input_mode;
        t.prompt_variant = options.prompt_variant;
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& ex) {
          t.failure = std::string("error: ") + ex.what();
        } catch (...) {
          t.failure = "error: unknown";
        }
        t.verdict = grade_unusable(std::nullopt, entry.annotation, options.grading_mode);
        trials[job] = std::move(t);
      }
    }
  };

  const auto n = std::min<std::size_t>(static_cast<std::size_t>(options.concurrency), std::max<std::size_t>(jobs, 1));
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (fatal) std::rethrow_exception(fatal);

  std::sort(trials.begin(), trials.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return std::tie(a.maze_id, a.provider) < std::tie(b.maze_id, b.provider);
  });

  RunReport report;
  report.metadata.timestamp = options.timestamp ? options.timestamp() : utc_now();
  report.metadata.config_digest = config_digest(providers, options);
  report.metadata.manifest_digest = manifest_digest(manifest);
  report.metadata.prompt_version = std::string(kPromptVersion);
  report.metadata.input_mode = options.input_mode;
  report.metadata.prompt_variant = options.prompt_variant;
  report.metadata.grading_mode = options.grading_mode;
  report.metadata.groups = options.groups;
  report.providers = providers;
  report.trials = std::move(trials);
  return report;
}

void to_json(json& j, const TrialRecord& t) {
  j = json{{"maze_id", t.maze_id},
           {"group_id", std::string(1, t.group_id)},
           {"provider", t.provider},
           {"input_mode", to_string(t.input_mode)},
           {"prompt_variant", to_string(t.prompt_variant)},
           {"attempts", t.attempts},
           {"latency_s", t.latency_s},
           {"tokens", {{"input", t.tokens.input}, {"thinking", t.tokens.thinking}, {"output", t.tokens.output}}},
           {"response", nullptr},
           {"failure", t.failure},
           {"output_truncated", t.output_truncated},
           {"salvaged_reachable", nullptr},
           {"verdict", t.verdict},
           {"warnings", t.warnings}};
  if (t.response) j["response"] = *t.response;
  if (t.salvaged_reachable) j["salvaged_reachable"] = *t.salvaged_reachable;
}

void from_json(const json& j, TrialRecord& t) {
  t = TrialRecord{};
  t.maze_id = j.at("maze_id").get<std::string>();
  const auto group = j.at("group_id").get<std::string>();
  if (group.size() != 1) throw ConfigError("trial group_id must be one letter");
  t.group_id = group[0];
  t.provider = j.at("provider").get<std::string>();
  t.input_mode = input_mode_from_string(j.at("input_mode").get<std::string>());
  t.prompt_variant = prompt_variant_from_string(j.at("prompt_variant").get<std::string>());
  t.attempts = j.at("attempts").get<int>();
  t.latency_s = j.at("latency_s").get<double>();
  const auto& tok = j.at("tokens");
  t.tokens = {tok.at("input").get<std::int64_t>(), tok.at("thinking").get<std::int64_t>(),
              tok.at("output").get<std::int64_t>()};
  if (!j.at("response").is_null()) t.response = j["response"].get<SolverResponse>();
  t.failure = j.value("failure", std::string{});
  t.output_truncated = j.value("output_truncated", false);
  if (j.contains("salvaged_reachable") && !j["salvaged_reachable"].is_null()) {
    t.salvaged_reachable = j["salvaged_reachable"].get<bool>();
  }
  t.verdict = j.at("verdict").get<Verdict>();
  t.warnings = j.value("warnings", std::vector<std::string>{});
}

json report_to_json(const RunReport& report) {
  const auto& m = report.metadata;
  return json{{"metadata",
               {{"timestamp", m.timestamp},
                {"config_digest", m.config_digest},
                {"manifest_digest", m.manifest_digest},
                {"prompt_version", m.prompt_version},
                {"input_mode", to_string(m.input_mode)},
                {"prompt_variant", to_string(m.prompt_variant)},
                {"grading_mode", to_string(m.grading_mode)},
                {"groups", m.groups}}},
              {"providers", report.providers},
              {"trials", report.trials}};
}

RunReport report_from_json(const json& j) {
  try {
    RunReport r;
    const auto& m = j.at("metadata");
    r.metadata.timestamp = m.at("timestamp").get<std::string>();
    r.metadata.config_digest = m.at("config_digest").get<std::string>();
    r.metadata.manifest_digest = m.at("manifest_digest").get<std::string>();
    r.metadata.prompt_version = m.value("prompt_version", std::string{});
    r.metadata.input_mode = input_mode_from_string(m.at("input_mode").get<std::string>());
    r.metadata.prompt_variant = prompt_variant_from_string(m.at("prompt_variant").get<std::string>());
    r.metadata.grading_mode = grading_mode_from_string(m.at("grading_mode").get<std::string>());
    r.metadata.groups = m.value("groups", std::string{});
    r.providers = j.at("providers").get<std::vector<ProviderConfig>>();
    r.trials = j.at("trials").get<std::vector<TrialRecord>>();
    return r;
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("malformed run report: ") + ex.what());
  }
}

void write_report(const RunReport& report, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write report " + path.string());
  out << report_to_json(report).dump(2) << '\n';
}

RunReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open report " + path.string());
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("report " + path.string() + " is not JSON");
  return report_from_json(j);
}

}  // namespace gridmaze::harness
