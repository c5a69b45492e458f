#include <atomic>
#include <cstdlib>

#include <gtest/gtest.h>

#include "gridmaze/dataset.hpp"
#include "gridmaze/encoding.hpp"
#include "gridmaze/errors.hpp"
#include "gridmaze/harness/eval.hpp"
#include "gridmaze/renderer.hpp"
#include "gridmaze/serialization.hpp"
#include "support/mock_provider.hpp"

using namespace gridmaze;
using namespace gridmaze::harness;
using nlohmann::json;

namespace {

const Manifest& small_manifest() {
  static const Manifest m = [] {
    GroupSpec a;
    a.group_id = 'B';
    a.count = 6;
    a.sizes = {5, 7};
    a.densities = {0.2};
    a.unreachable_count = 2;
    return assemble_benchmark({a}, 11);
  }();
  return m;
}

ProviderConfig local(const std::string& solver) {
  ProviderConfig p;
  p.label = solver;
  p.adapter_kind = AdapterKind::Local;
  p.model_id = solver;
  return p;
}

ProviderConfig remote(AdapterKind kind, const std::string& base, Reasoning reasoning = Reasoning::None) {
  ProviderConfig p;
  p.label = "remote";
  p.adapter_kind = kind;
  p.model_id = "model-x";
  p.reasoning = reasoning;
  p.api_base = base;
  return p;
}

std::string oracle_answer(const ManifestEntry& e) {
  json a{{"grid_size", {e.grid.rows(), e.grid.cols()}},
         {"start_found", true},
         {"goal_found", true},
         {"reachable", e.annotation.reachable},
         {"path_length", e.annotation.shortest_len ? json(*e.annotation.shortest_len) : json(nullptr)},
         {"path", e.annotation.reachable ? json(e.annotation.accepted_paths.front()) : json::array()}};
  return a.dump();
}

// Adapter returning scripted answer texts in order, then repeating the last.
class ScriptedAdapter final : public Adapter {
 public:
  explicit ScriptedAdapter(std::vector<AdapterReply> replies) : replies_(std::move(replies)) {}
  AdapterReply send(const ProviderRequest&, const ManifestEntry&) override {
    const std::size_t i = std::min(calls_++, replies_.size() - 1);
    return replies_[i];
  }
  std::size_t calls() const { return calls_; }

 private:
  std::vector<AdapterReply> replies_;
  std::size_t calls_ = 0;
};

AdapterReply reply(std::string text, TokenUsage usage = {10, 5, 3}, bool truncated = false) {
  AdapterReply r;
  r.text = std::move(text);
  r.usage = usage;
  r.truncated = truncated;
  return r;
}

TrialClock ticking_clock(double step) {
  return [t = 0.0, step]() mutable { return t += step; };
}

bool contains_key(const json& j, const std::string& key) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (k == key || contains_key(v, key)) return true;
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (contains_key(v, key)) return true;
    }
  }
  return false;
}

}  // namespace

TEST(ProviderConfig, TemperatureRules) {
  auto p = remote(AdapterKind::MessagesApi, "http://x", Reasoning::Low);
  EXPECT_EQ(effective_temperature(p), 1.0);
  p.reasoning = Reasoning::None;
  EXPECT_EQ(effective_temperature(p), 0.0);
  auto r = remote(AdapterKind::ResponsesApi, "http://x", Reasoning::None);
  EXPECT_EQ(effective_temperature(r), 0.0);
  r.reasoning = Reasoning::Medium;
  EXPECT_FALSE(effective_temperature(r));
  auto m = remote(AdapterKind::MessagesApi, "http://x", Reasoning::Medium);
  m.temperature = 0.0;
  EXPECT_THROW(m.validate(), ConfigError);
}

TEST(ProviderConfig, UnsupportedCombinations) {
  EXPECT_THROW(remote(AdapterKind::GeminiRest, "http://x", Reasoning::Medium).validate(), UnsupportedCombination);
  EXPECT_THROW(remote(AdapterKind::DashScope, "http://x", Reasoning::None).validate(), UnsupportedCombination);
  EXPECT_NO_THROW(remote(AdapterKind::GeminiRest, "http://x", Reasoning::Default).validate());
  auto m = remote(AdapterKind::MessagesApi, "http://x", Reasoning::Medium);
  m.max_output_tokens = 2048;
  EXPECT_THROW(m.validate(), UnsupportedCombination);
  auto l = local("oracle");
  l.reasoning = Reasoning::Low;
  EXPECT_THROW(l.validate(), UnsupportedCombination);
  EXPECT_THROW(remote(AdapterKind::ResponsesApi, "").validate(), ConfigError);
  EXPECT_EQ(ProviderConfig{}.max_output_tokens, 8192);
}

TEST(ProviderConfig, JsonRoundTripAndNames) {
  auto p = remote(AdapterKind::MessagesApi, "https://api.example", Reasoning::Low);
  p.key_env_var = "KEY";
  p.requests_per_minute = 30;
  const auto back = json(p).get<ProviderConfig>();
  EXPECT_EQ(json(back), json(p));
  EXPECT_EQ(adapter_kind_from_string("gemini-rest"), AdapterKind::GeminiRest);
  EXPECT_EQ(input_mode_from_string("text-grid"), InputMode::TextGrid);
  EXPECT_THROW(reasoning_from_string("high"), ConfigError);
}

TEST(BuildRequest, ImageModeCarriesDataUrl) {
  const auto& e = small_manifest().entries[0];
  const auto png = render_png(e.grid, e.spec.palette, e.spec.seed);
  for (AdapterKind kind : {AdapterKind::ResponsesApi, AdapterKind::DashScope}) {
    const auto p = remote(kind, "http://x", kind == AdapterKind::DashScope ? Reasoning::Default : Reasoning::None);
    const auto req = build_request(e, p, InputMode::Image, PromptVariant::Standard, png);
    const std::string body = req.body.dump();
    const auto at = body.find(kPngDataUrlPrefix);
    ASSERT_NE(at, std::string::npos);
    const auto end = body.find('"', at);
    const auto decoded = base64_decode(body.substr(at + kPngDataUrlPrefix.size(), end - at - kPngDataUrlPrefix.size()));
    EXPECT_EQ(decoded, png);
    EXPECT_FALSE(contains_key(req.body, "tools"));
    EXPECT_FALSE(contains_key(req.body, "tool_choice"));
    EXPECT_NE(req.prompt.find(kNoToolsClause), std::string::npos);
  }
}

TEST(BuildRequest, NativeImageBlocks) {
  const auto& e = small_manifest().entries[0];
  const auto png = render_png(e.grid, e.spec.palette, e.spec.seed);
  const auto msg = build_request(e, remote(AdapterKind::MessagesApi, "http://x", Reasoning::Low), InputMode::Image,
                                 PromptVariant::Standard, png);
  EXPECT_EQ(msg.path, "/v1/messages");
  EXPECT_EQ(msg.body["messages"][0]["content"][0]["source"]["data"], base64_encode(png));
  EXPECT_EQ(msg.body["thinking"]["budget_tokens"], 1024);
  EXPECT_EQ(msg.body["temperature"], 1.0);
  EXPECT_NE(std::find(msg.headers.begin(), msg.headers.end(),
                      std::pair<std::string, std::string>{"anthropic-version", "2023-06-01"}),
            msg.headers.end());
  const auto gem = build_request(e, remote(AdapterKind::GeminiRest, "http://x", Reasoning::Default), InputMode::Image,
                                 PromptVariant::Standard, png);
  EXPECT_EQ(gem.path, "/v1beta/models/model-x:generateContent");
  EXPECT_EQ(gem.body["contents"][0]["parts"][1]["inline_data"]["data"], base64_encode(png));
  EXPECT_FALSE(gem.body["generationConfig"].contains("temperature"));
}

TEST(BuildRequest, ReasoningKnobs) {
  const auto& e = small_manifest().entries[0];
  const auto none = build_request(e, remote(AdapterKind::ResponsesApi, "http://x", Reasoning::None), InputMode::TextGrid,
                                  PromptVariant::Standard);
  EXPECT_EQ(none.body["reasoning"]["effort"], "none");
  EXPECT_EQ(none.body["temperature"], 0.0);
  EXPECT_EQ(none.body["max_output_tokens"], 8192);
  const auto med = build_request(e, remote(AdapterKind::ResponsesApi, "http://x", Reasoning::Medium),
                                 InputMode::TextGrid, PromptVariant::Standard);
  EXPECT_EQ(med.body["reasoning"]["effort"], "medium");
  EXPECT_FALSE(med.body.contains("temperature"));
  const auto off = build_request(e, remote(AdapterKind::MessagesApi, "http://x", Reasoning::None), InputMode::TextGrid,
                                 PromptVariant::Standard);
  EXPECT_FALSE(off.body.contains("thinking"));
  EXPECT_EQ(off.body["temperature"], 0.0);
}

TEST(BuildRequest, TextModeEmbedsExactGrid) {
  const auto& e = small_manifest().entries[1];
  const auto req = build_request(e, remote(AdapterKind::ResponsesApi, "http://x"), InputMode::TextGrid,
                                 PromptVariant::Standard);
  EXPECT_NE(req.prompt.find("```\n" + export_text_grid(e.grid) + "\n```"), std::string::npos);
  EXPECT_EQ(req.body.dump().find("data:image"), std::string::npos);
  EXPECT_EQ(req.body["input"][0]["content"].size(), 1u);
}

TEST(BuildRequest, VisualIntuitionVariant) {
  const auto& e = small_manifest().entries[0];
  const auto png = render_png(e.grid, e.spec.palette, e.spec.seed);
  const auto std_req = build_request(e, local("oracle"), InputMode::Image, PromptVariant::Standard, png);
  const auto vi_req = build_request(e, local("oracle"), InputMode::Image, PromptVariant::VisualIntuition, png);
  EXPECT_EQ(std_req.prompt.find("Do NOT convert the maze into a text grid"), std::string::npos);
  EXPECT_NE(vi_req.prompt.find(kVisualIntuitionClause), std::string::npos);
}

TEST(BuildRequest, ImageModeNeedsBytes) {
  EXPECT_THROW(build_request(small_manifest().entries[0], local("oracle"), InputMode::Image, PromptVariant::Standard),
               ConfigError);
}

TEST(ParseReply, UsageFieldsPerAdapter) {
  const auto r = parse_provider_reply(AdapterKind::ResponsesApi, json::parse(testkit::responses_api_body("hi", 7, 4, 9)));
  EXPECT_EQ(r.text, "hi");
  EXPECT_EQ(r.usage, (TokenUsage{7, 4, 5}));

  const json gem{{"candidates",
                  {{{"content", {{"parts", {{{"text", "thinking..."}, {"thought", true}}, {{"text", "answer"}}}}}},
                    {"finishReason", "MAX_TOKENS"}}}},
                 {"usageMetadata", {{"promptTokenCount", 11}, {"candidatesTokenCount", 22}, {"thoughtsTokenCount", 33}}}};
  const auto g = parse_provider_reply(AdapterKind::GeminiRest, gem);
  EXPECT_EQ(g.text, "answer");
  EXPECT_TRUE(g.truncated);
  EXPECT_EQ(g.usage, (TokenUsage{11, 33, 22}));

  const json msg{{"content", {{{"type", "thinking"}, {"thinking", "..."}}, {{"type", "text"}, {"text", "ok"}}}},
                 {"stop_reason", "end_turn"},
                 {"usage", {{"input_tokens", 5}, {"output_tokens", 6}}}};
  const auto m = parse_provider_reply(AdapterKind::MessagesApi, msg);
  EXPECT_EQ(m.text, "ok");
  EXPECT_EQ(m.usage.total(), 11);

  const json ds{{"choices", {{{"message", {{"content", "x"}}}, {"finish_reason", "length"}}}}};
  const auto d = parse_provider_reply(AdapterKind::DashScope, ds);
  EXPECT_TRUE(d.truncated);
  EXPECT_EQ(d.usage, (TokenUsage{}));
  EXPECT_FALSE(d.warnings.empty());

  EXPECT_THROW(parse_provider_reply(AdapterKind::ResponsesApi, json{{"nope", 1}}), TransportError);
}

TEST(SolveOne, RetriesParseFailuresThenGrades) {
  const auto& e = small_manifest().entries[0];
  ScriptedAdapter adapter({reply("garbage"), reply("{not json"), reply(oracle_answer(e))});
  const auto req = build_request(e, local("oracle"), InputMode::TextGrid, PromptVariant::Standard);
  const auto t = solve_one(adapter, local("oracle"), e, req, GradingMode::AnnotationMatch, ticking_clock(0.5));
  EXPECT_EQ(t.attempts, 3);
  EXPECT_TRUE(t.response);
  EXPECT_TRUE(t.verdict.solved);
  EXPECT_DOUBLE_EQ(t.latency_s, 1.5);
  EXPECT_EQ(t.tokens, (TokenUsage{30, 15, 9}));
  EXPECT_TRUE(t.failure.empty());
}

TEST(SolveOne, ExhaustsAfterThreeAttempts) {
  const auto& e = small_manifest().entries[0];
  ScriptedAdapter adapter({reply("still not json")});
  const auto req = build_request(e, local("oracle"), InputMode::TextGrid, PromptVariant::Standard);
  const auto t = solve_one(adapter, local("oracle"), e, req, GradingMode::AnnotationMatch, ticking_clock(1.0));
  EXPECT_EQ(adapter.calls(), 3u);
  EXPECT_EQ(t.attempts, 3);
  EXPECT_FALSE(t.response);
  EXPECT_FALSE(t.verdict.solved);
  EXPECT_EQ(t.failure.rfind("parse:", 0), 0u);
}

TEST(SolveOne, TruncatedAnswerNeverSolved) {
  const auto& e = small_manifest().entries[0];
  ScriptedAdapter adapter({reply(oracle_answer(e), {}, true)});
  const auto req = build_request(e, local("oracle"), InputMode::TextGrid, PromptVariant::Standard);
  const auto t = solve_one(adapter, local("oracle"), e, req, GradingMode::AnnotationMatch, ticking_clock(1.0));
  EXPECT_EQ(t.attempts, 1);
  EXPECT_TRUE(t.output_truncated);
  EXPECT_FALSE(t.verdict.solved);
  EXPECT_TRUE(t.verdict.reach_correct);
}

TEST(SolveOne, TruncatedGarbageSalvagesReachability) {
  const ManifestEntry* unreachable = nullptr;
  for (const auto& e : small_manifest().entries) {
    if (!e.annotation.reachable) unreachable = &e;
  }
  ASSERT_NE(unreachable, nullptr);
  ScriptedAdapter adapter({reply(R"({"grid_size": [7, 7], "reachable": false, "path": [)", {}, true)});
  const auto req = build_request(*unreachable, local("oracle"), InputMode::TextGrid, PromptVariant::Standard);
  const auto t = solve_one(adapter, local("oracle"), *unreachable, req, GradingMode::AnnotationMatch, ticking_clock(1.0));
  EXPECT_EQ(t.attempts, 3);
  EXPECT_EQ(t.salvaged_reachable, false);
  EXPECT_TRUE(t.verdict.reach_correct);
  EXPECT_FALSE(t.verdict.solved);
}

TEST(LocalSolvers, OracleAndReadbackSolveEverything) {
  for (const auto* solver : {"oracle", "readback"}) {
    for (InputMode mode : {InputMode::Image, InputMode::TextGrid}) {
      for (GradingMode gm : {GradingMode::AnnotationMatch, GradingMode::Simulate}) {
        RunOptions o;
        o.input_mode = mode;
        o.grading_mode = gm;
        const auto report = run_eval(small_manifest(), {local(solver)}, o);
        for (const auto& t : report.trials) EXPECT_TRUE(t.verdict.solved) << solver << " " << t.maze_id;
      }
    }
  }
}

TEST(LocalSolvers, NaiveNeverSolvesUnreachable) {
  RunOptions o;
  o.input_mode = InputMode::TextGrid;
  const auto report = run_eval(small_manifest(), {local("naive")}, o);
  int reach_correct = 0;
  int reachable = 0;
  for (std::size_t i = 0; i < report.trials.size(); ++i) {
    const auto& e = *small_manifest().find(report.trials[i].maze_id);
    reachable += e.annotation.reachable ? 1 : 0;
    reach_correct += report.trials[i].verdict.reach_correct ? 1 : 0;
    if (!e.annotation.reachable) EXPECT_FALSE(report.trials[i].verdict.solved);
  }
  EXPECT_EQ(reach_correct, reachable);
}

TEST(LocalSolvers, UnknownSolverRejected) { EXPECT_THROW(LocalAdapter(local("psychic")), ConfigError); }

TEST(RemoteAdapter, SendsAuthAndParsesReply) {
  ::setenv("GRIDMAZE_TEST_KEY", "sekrit", 1);
  testkit::MockProvider mock([](const testkit::RecordedRequest&) {
    return testkit::MockReply{200, testkit::responses_api_body(R"({"reachable": false, "path": []})")};
  });
  auto p = remote(AdapterKind::ResponsesApi, mock.base_url() + "/proxy/");
  p.key_env_var = "GRIDMAZE_TEST_KEY";
  RemoteAdapter adapter(p);
  const auto& e = small_manifest().entries[0];
  const auto r = adapter.send(build_request(e, p, InputMode::TextGrid, PromptVariant::Standard), e);
  EXPECT_EQ(r.text, R"({"reachable": false, "path": []})");
  const auto reqs = mock.requests();
  ASSERT_EQ(reqs.size(), 1u);
  EXPECT_EQ(reqs[0].path, "/proxy/v1/responses");
  EXPECT_EQ(reqs[0].headers.find("Authorization")->second, "Bearer sekrit");
  EXPECT_EQ(reqs[0].body["model"], "model-x");
}

TEST(RemoteAdapter, MissingKeyIsAuthError) {
  ::unsetenv("GRIDMAZE_TEST_MISSING");
  auto p = remote(AdapterKind::ResponsesApi, "http://127.0.0.1:1");
  p.key_env_var = "GRIDMAZE_TEST_MISSING";
  EXPECT_THROW(RemoteAdapter{p}, AuthError);
}

TEST(RemoteAdapter, RetriesServerErrorsWithBackoff) {
  std::atomic<int> calls{0};
  testkit::MockProvider mock([&](const testkit::RecordedRequest&) {
    if (calls++ < 2) return testkit::MockReply{503, "{}"};
    return testkit::MockReply{200, testkit::responses_api_body("ok")};
  });
  std::vector<double> sleeps;
  TransportOptions t;
  t.sleep = [&](double s) { sleeps.push_back(s); };
  auto p = remote(AdapterKind::ResponsesApi, mock.base_url());
  RemoteAdapter adapter(p, t);
  const auto& e = small_manifest().entries[0];
  EXPECT_EQ(adapter.send(build_request(e, p, InputMode::TextGrid, PromptVariant::Standard), e).text, "ok");
  ASSERT_EQ(sleeps.size(), 2u);
  EXPECT_LT(sleeps[0], 1.0);
  EXPECT_LT(sleeps[1], 2.0);
}

TEST(RemoteAdapter, GivesUpAndClassifiesErrors) {
  std::atomic<int> status{429};
  testkit::MockProvider mock([&](const testkit::RecordedRequest&) { return testkit::MockReply{status.load(), "{}"}; });
  TransportOptions t;
  t.max_transport_retries = 2;
  t.sleep = [](double) {};
  auto p = remote(AdapterKind::ResponsesApi, mock.base_url());
  RemoteAdapter adapter(p, t);
  const auto& e = small_manifest().entries[0];
  const auto req = build_request(e, p, InputMode::TextGrid, PromptVariant::Standard);
  EXPECT_THROW(adapter.send(req, e), TransportError);
  EXPECT_EQ(mock.requests().size(), 3u);
  status = 400;
  EXPECT_THROW(adapter.send(req, e), TransportError);
  EXPECT_EQ(mock.requests().size(), 4u);
  status = 401;
  EXPECT_THROW(adapter.send(req, e), AuthError);
}

TEST(RemoteAdapter, ConnectionRefusedIsTransportError) {
  TransportOptions t;
  t.max_transport_retries = 1;
  t.sleep = [](double) {};
  auto p = remote(AdapterKind::ResponsesApi, "http://127.0.0.1:1");
  p.timeout_s = 2;
  RemoteAdapter adapter(p, t);
  const auto& e = small_manifest().entries[0];
  EXPECT_THROW(adapter.send(build_request(e, p, InputMode::TextGrid, PromptVariant::Standard), e), TransportError);
}

TEST(Backoff, FullJitterBounds) {
  TransportOptions t;
  t.backoff_base_s = 1.0;
  t.backoff_cap_s = 10.0;
  EXPECT_DOUBLE_EQ(backoff_delay(t, 0, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(backoff_delay(t, 3, 1.0), 8.0);
  EXPECT_DOUBLE_EQ(backoff_delay(t, 10, 1.0), 10.0);
  EXPECT_DOUBLE_EQ(backoff_delay(t, 10, 0.0), 0.0);
}

TEST(TokenBucket, SpacesRequests) {
  TokenBucket bucket(1200);  // one per 50 ms
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 4; ++i) bucket.acquire();
  EXPECT_GE(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(140));
  TokenBucket unlimited(0);
  unlimited.acquire();
}

TEST(RunEval, ReportIndependentOfConcurrency) {
  const Manifest& m = small_manifest();
  std::map<std::string, std::string> answers;
  for (const auto& e : m.entries) answers[export_text_grid(e.grid)] = oracle_answer(e);
  std::mutex mu;
  std::map<std::string, int> seen;
  testkit::MockProvider mock([&](const testkit::RecordedRequest& r) {
    const std::string prompt = r.body["input"][0]["content"][0]["text"];
    const auto open = prompt.find("```\n") + 4;
    const std::string grid = prompt.substr(open, prompt.rfind("\n```") - open);
    int n = 0;
    {
      std::lock_guard lock(mu);
      n = seen[r.body["model"].get<std::string>() + grid]++;
    }
    // Every maze's first answer is unparseable, forcing one retry.
    return testkit::MockReply{200, testkit::responses_api_body(n == 0 ? "I think so" : answers.at(grid))};
  });
  const auto run = [&](int concurrency) {
    {
      std::lock_guard lock(mu);
      seen.clear();
    }
    RunOptions o;
    o.input_mode = InputMode::TextGrid;
    o.concurrency = concurrency;
    o.clock_factory = [] { return ticking_clock(0.25); };
    o.timestamp = [] { return std::string("2026-01-01T00:00:00Z"); };
    auto p = remote(AdapterKind::ResponsesApi, mock.base_url());
    return report_to_json(run_eval(m, {p, [&] {
                                         auto q = p;
                                         q.label = "remote-2";
                                         q.model_id = "model-y";
                                         return q;
                                       }()},
                                   o))
        .dump(2);
  };
  const std::string serial = run(1);
  const std::string parallel = run(8);
  EXPECT_EQ(serial, parallel);
  const auto report = report_from_json(json::parse(serial));
  ASSERT_EQ(report.trials.size(), 2 * m.entries.size());
  for (const auto& t : report.trials) {
    EXPECT_EQ(t.attempts, 2);
    EXPECT_TRUE(t.verdict.solved);
  }
}

TEST(RunEval, FatalErrorsAbort) {
  testkit::MockProvider mock([](const testkit::RecordedRequest&) { return testkit::MockReply{403, "{}"}; });
  RunOptions o;
  o.input_mode = InputMode::TextGrid;
  EXPECT_THROW(run_eval(small_manifest(), {remote(AdapterKind::ResponsesApi, mock.base_url())}, o), AuthError);
  EXPECT_THROW(run_eval(small_manifest(), {}, o), ConfigError);
  EXPECT_THROW(run_eval(small_manifest(), {local("oracle"), local("oracle")}, o), ConfigError);
}

TEST(RunEval, TransportFailuresRecorded) {
  RunOptions o;
  o.input_mode = InputMode::TextGrid;
  o.transport.max_transport_retries = 0;
  auto p = remote(AdapterKind::ResponsesApi, "http://127.0.0.1:1");
  const auto report = run_eval(small_manifest(), {p}, o);
  for (const auto& t : report.trials) {
    EXPECT_EQ(t.failure.rfind("transport:", 0), 0u);
    EXPECT_FALSE(t.verdict.solved);
  }
}

TEST(RunEval, GroupFilterAndReportFile) {
  RunOptions o;
  o.groups = "Z";
  EXPECT_TRUE(run_eval(small_manifest(), {local("oracle")}, o).trials.empty());
  o.groups = "B";
  o.input_mode = InputMode::TextGrid;
  const auto report = run_eval(small_manifest(), {local("oracle")}, o);
  const auto path = std::filesystem::temp_directory_path() / "gridmaze_report_test.json";
  write_report(report, path);
  const auto loaded = load_report(path);
  EXPECT_EQ(report_to_json(loaded), report_to_json(report));
  EXPECT_EQ(loaded.metadata.manifest_digest, manifest_digest(small_manifest()));
  std::filesystem::remove(path);
}
