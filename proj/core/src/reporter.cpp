#include "gridmaze/reporter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include "gridmaze/errors.hpp"

namespace gridmaze::report {

using nlohmann::json;

namespace {

constexpr std::string_view kScopeNames[] = {"core", "ultra-hard", "all"};
constexpr std::string_view kKindNames[] = {"leaderboard", "per_group", "efficiency", "ultra_hard", "ablation"};
constexpr std::string_view kFormatNames[] = {"markdown", "csv", "json"};
constexpr std::string_view kDash = "—";

template <typename E, std::size_t N>
E parse_name(std::string_view s, const std::string_view (&names)[N], std::string_view what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  throw ConfigError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

using RowKey = std::tuple<std::string, InputMode, PromptVariant>;

struct Accumulator {
  MetricsRow row;
  std::vector<double> latencies;
  std::set<std::string> mazes;
};

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

const ManifestEntry& checked_entry(const harness::TrialRecord& t, const Manifest& manifest) {
  const ManifestEntry* e = manifest.find(t.maze_id);
  if (e == nullptr) throw InconsistentReport("trial references unknown maze " + t.maze_id);
  if (e->group_id != t.group_id) {
    throw InconsistentReport("trial " + t.maze_id + " is in group " + std::string(1, t.group_id) +
                             " but the manifest says " + std::string(1, e->group_id));
  }
  return *e;
}

std::string reasoning_of(const RunReport& run, const std::string& label) {
  for (const auto& p : run.providers) {
    if (p.label == label) return std::string(harness::to_string(p.reasoning));
  }
  return {};
}

// Claimed reachability of a trial, if the solver made any claim.
std::optional<bool> claimed_reachable(const harness::TrialRecord& t) {
  if (t.response) return t.response->reachable;
  return t.salvaged_reachable;
}

std::string display_label(const MetricsRow& r) {
  std::string s = r.label;
  if (r.input_mode != InputMode::Image) s += " [" + std::string(harness::to_string(r.input_mode)) + "]";
  if (r.prompt_variant != PromptVariant::Standard) s += " [" + std::string(harness::to_string(r.prompt_variant)) + "]";
  return s;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string render(const Table& t, Format format) {
  std::ostringstream os;
  if (format == Format::Csv) {
    const auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_cell(cells[i]);
      os << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return os.str();
  }
  const auto line = [&](const std::vector<std::string>& cells) {
    os << '|';
    for (const auto& c : cells) os << ' ' << c << " |";
    os << '\n';
  };
  line(t.header);
  os << '|';
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i == 0 ? " --- |" : " ---: |");
  os << '\n';
  for (const auto& r : t.rows) line(r);
  return os.str();
}

std::string fraction(int num, int den) { return std::to_string(num) + "/" + std::to_string(den); }

std::vector<MetricsRow> sorted_by_solves(std::vector<MetricsRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const MetricsRow& a, const MetricsRow& b) {
    if (a.solved != b.solved) return a.solved > b.solved;
    return display_label(a) < display_label(b);
  });
  return rows;
}

}  // namespace

std::string_view to_string(Scope v) noexcept { return kScopeNames[static_cast<int>(v)]; }
std::string_view to_string(TableKind v) noexcept { return kKindNames[static_cast<int>(v)]; }
std::string_view to_string(Format v) noexcept { return kFormatNames[static_cast<int>(v)]; }
Scope scope_from_string(std::string_view s) { return parse_name<Scope>(s, kScopeNames, "scope"); }
TableKind table_kind_from_string(std::string_view s) { return parse_name<TableKind>(s, kKindNames, "table kind"); }
Format format_from_string(std::string_view s) { return parse_name<Format>(s, kFormatNames, "format"); }

bool in_scope(char group_id, Scope scope) noexcept {
  switch (scope) {
    case Scope::Core:
      return group_id != 'X';
    case Scope::UltraHard:
      return group_id == 'X';
    case Scope::All:
      return true;
  }
  return false;
}

std::optional<double> tokens_per_solve(std::int64_t total_tokens, int solved) noexcept {
  if (solved <= 0) return std::nullopt;
  return static_cast<double>(total_tokens) / solved;
}

std::optional<double> false_positive_rate(int false_positives, int unreachable_total) noexcept {
  if (unreachable_total <= 0) return std::nullopt;
  return 100.0 * false_positives / unreachable_total;
}

std::vector<MetricsRow> compute_metrics(const std::vector<RunReport>& runs, const Manifest& manifest, Scope scope) {
  std::map<RowKey, Accumulator> acc;
  for (const auto& run : runs) {
    for (const auto& t : run.trials) {
      const ManifestEntry& e = checked_entry(t, manifest);
      if (!in_scope(e.group_id, scope)) continue;
      auto& a = acc[RowKey{t.provider, t.input_mode, t.prompt_variant}];
      if (!a.mazes.insert(t.maze_id).second) {
        throw InconsistentReport("duplicate trial for " + t.maze_id + " / " + t.provider);
      }
      MetricsRow& r = a.row;
      if (r.label.empty()) {
        r.label = t.provider;
        r.reasoning = reasoning_of(run, t.provider);
        r.input_mode = t.input_mode;
        r.prompt_variant = t.prompt_variant;
      }
      ++r.total;
      ++r.per_group_totals[e.group_id];
      r.per_group_solves[e.group_id] += t.verdict.solved ? 1 : 0;
      r.solved += t.verdict.solved ? 1 : 0;
      r.reach_correct += t.verdict.reach_correct ? 1 : 0;
      if (!e.annotation.reachable) {
        ++r.unreachable_total;
        r.false_positives += claimed_reachable(t).value_or(false) ? 1 : 0;
      }
      r.input_tokens += t.tokens.input;
      r.total_tokens += t.tokens.thinking + t.tokens.output;
      a.latencies.push_back(t.latency_s);
    }
  }

  std::vector<MetricsRow> rows;
  for (auto& [key, a] : acc) {
    MetricsRow& r = a.row;
    r.reach_accuracy = r.total ? 100.0 * r.reach_correct / r.total : 0.0;
    r.false_positive_rate = false_positive_rate(r.false_positives, r.unreachable_total);
    r.tokens_per_solve = tokens_per_solve(r.total_tokens, r.solved);
    // Summed in sorted order so the result does not depend on trial order.
    std::sort(a.latencies.begin(), a.latencies.end());
    double sum = 0.0;
    for (double l : a.latencies) sum += l;
    r.avg_latency_s = a.latencies.empty() ? 0.0 : sum / static_cast<double>(a.latencies.size());
    r.median_latency_s = median(a.latencies);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<MetricsRow> compute_metrics(const RunReport& run, const Manifest& manifest, Scope scope) {
  return compute_metrics(std::vector<RunReport>{run}, manifest, scope);
}

std::vector<UltraHardRow> ultra_hard_rows(const std::vector<RunReport>& runs, const Manifest& manifest) {
  std::vector<UltraHardRow> out;
  for (const auto& run : runs) {
    for (const auto& t : run.trials) {
      const ManifestEntry& e = checked_entry(t, manifest);
      if (e.group_id != 'X') continue;
      UltraHardRow r;
      r.maze_id = t.maze_id;
      r.provider = t.provider;
      if (t.input_mode != InputMode::Image) r.provider += " [" + std::string(harness::to_string(t.input_mode)) + "]";
      r.gt_reachable = e.annotation.reachable;
      r.gt_length = e.annotation.shortest_len;
      r.pred_reachable = claimed_reachable(t);
      if (t.response && t.response->reachable) {
        if (t.response->path_length) {
          r.pred_length = t.response->path_length;
        } else if (t.response->path) {
          r.pred_length = static_cast<int>(t.response->path->size());
        }
      }
      r.solved = t.verdict.solved;
      r.partial = !t.verdict.solved && t.verdict.truncated_output && t.verdict.reach_correct;
      r.latency_s = t.latency_s;
      out.push_back(std::move(r));
    }
  }
  std::sort(out.begin(), out.end(), [](const UltraHardRow& a, const UltraHardRow& b) {
    return std::tie(a.provider, a.maze_id) < std::tie(b.provider, b.maze_id);
  });
  return out;
}

std::string format_rounded(double v) { return std::to_string(std::llround(v)); }

std::string format_latency(double seconds) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", seconds);
  return buf;
}

std::string format_optional(const std::optional<double>& v) { return v ? format_rounded(*v) : std::string(kDash); }

json to_json_value(const MetricsRow& r) {
  json groups = json::object();
  for (const auto& [g, n] : r.per_group_solves) {
    groups[std::string(1, g)] = {{"solved", n}, {"total", r.per_group_totals.at(g)}};
  }
  json j{{"label", r.label},
         {"reasoning", r.reasoning},
         {"input_mode", harness::to_string(r.input_mode)},
         {"prompt_variant", harness::to_string(r.prompt_variant)},
         {"solved", r.solved},
         {"total", r.total},
         {"reach_correct", r.reach_correct},
         {"reach_accuracy", r.reach_accuracy},
         {"unreachable_total", r.unreachable_total},
         {"false_positives", r.false_positives},
         {"false_positive_rate", nullptr},
         {"avg_latency_s", r.avg_latency_s},
         {"median_latency_s", r.median_latency_s},
         {"input_tokens", r.input_tokens},
         {"total_tokens", r.total_tokens},
         {"tokens_per_solve", nullptr},
         {"per_group", groups}};
  if (r.false_positive_rate) j["false_positive_rate"] = *r.false_positive_rate;
  if (r.tokens_per_solve) j["tokens_per_solve"] = *r.tokens_per_solve;
  return j;
}

std::string emit_table(const std::vector<MetricsRow>& input, TableKind kind, Format format) {
  if (kind == TableKind::UltraHard) throw ConfigError("ultra_hard tables are built from trials; use emit_ultra_hard");
  std::vector<MetricsRow> rows;
  if (kind == TableKind::Ablation) {
    rows = input;
    std::stable_sort(rows.begin(), rows.end(), [](const MetricsRow& a, const MetricsRow& b) {
      return std::tie(a.label, a.input_mode, a.prompt_variant) < std::tie(b.label, b.input_mode, b.prompt_variant);
    });
  } else {
    rows = sorted_by_solves(input);
  }

  if (format == Format::Json) {
    json out{{"kind", to_string(kind)}, {"rows", json::array()}};
    for (const auto& r : rows) out["rows"].push_back(to_json_value(r));
    return out.dump(2) + "\n";
  }

  Table t;
  switch (kind) {
    case TableKind::Leaderboard:
      t.header = {"Model", "Solved", "Reach.%", "FP%", "Lat.(s)"};
      for (const auto& r : rows) {
        t.rows.push_back({display_label(r), fraction(r.solved, r.total), format_rounded(r.reach_accuracy),
                          format_optional(r.false_positive_rate), format_latency(r.avg_latency_s)});
      }
      break;
    case TableKind::PerGroup: {
      std::map<char, int> group_totals;
      for (const auto& r : rows) {
        for (const auto& [g, n] : r.per_group_totals) group_totals[g] = std::max(group_totals[g], n);
      }
      t.header = {"Model", "Reason."};
      int grand = 0;
      for (const auto& [g, n] : group_totals) {
        t.header.push_back(std::string(1, g) + " (/" + std::to_string(n) + ")");
        grand += n;
      }
      t.header.push_back("Total (/" + std::to_string(grand) + ")");
      for (const auto& r : rows) {
        std::vector<std::string> cells{display_label(r), r.reasoning};
        for (const auto& [g, n] : group_totals) {
          const auto it = r.per_group_solves.find(g);
          cells.push_back(std::to_string(it == r.per_group_solves.end() ? 0 : it->second));
        }
        cells.push_back(std::to_string(r.solved));
        t.rows.push_back(std::move(cells));
      }
      break;
    }
    case TableKind::Efficiency:
      t.header = {"Model", "Solved", "Tot.Tok.", "Tok/Solve"};
      for (const auto& r : rows) {
        t.rows.push_back({display_label(r), std::to_string(r.solved), std::to_string(r.total_tokens),
                          format_optional(r.tokens_per_solve)});
      }
      break;
    case TableKind::Ablation:
      t.header = {"Model", "Input", "Solved", "Tok/Solve", "Lat.(s)"};
      for (const auto& r : rows) {
        std::string input = std::string(harness::to_string(r.input_mode));
        if (!r.reasoning.empty()) input += " (" + r.reasoning + ")";
        if (r.prompt_variant != PromptVariant::Standard) input += " " + std::string(harness::to_string(r.prompt_variant));
        t.rows.push_back({r.label, input, fraction(r.solved, r.total), format_optional(r.tokens_per_solve),
                          format_latency(r.avg_latency_s)});
      }
      break;
    case TableKind::UltraHard:
      break;
  }
  return render(t, format);
}

std::string emit_ultra_hard(const std::vector<UltraHardRow>& rows, Format format) {
  const auto mark = [&](std::optional<bool> v) -> std::string {
    if (!v) return std::string(kDash);
    if (format == Format::Markdown) return *v ? "✓" : "×";
    return *v ? "yes" : "no";
  };
  if (format == Format::Json) {
    json out = json::array();
    for (const auto& r : rows) {
      out.push_back({{"maze_id", r.maze_id},
                     {"provider", r.provider},
                     {"gt_reachable", r.gt_reachable},
                     {"gt_length", r.gt_length ? json(*r.gt_length) : json(nullptr)},
                     {"pred_reachable", r.pred_reachable ? json(*r.pred_reachable) : json(nullptr)},
                     {"pred_length", r.pred_length ? json(*r.pred_length) : json(nullptr)},
                     {"solved", r.solved},
                     {"partial", r.partial},
                     {"latency_s", r.latency_s}});
    }
    return json{{"kind", "ultra_hard"}, {"rows", out}}.dump(2) + "\n";
  }

  Table t;
  t.header = {"Provider", "Maze", "GT", "Pred.", "Path", "Solved", "Lat.(s)"};
  const auto flush_total = [&](const std::string& provider, int solved, int n, double latency) {
    t.rows.push_back({provider, "Total solved", "", "", "", fraction(solved, n), format_latency(n ? latency / n : 0.0)});
  };
  std::string current;
  int solved = 0;
  int n = 0;
  double latency = 0.0;
  for (const auto& r : rows) {
    if (n > 0 && r.provider != current) {
      flush_total(current, solved, n, latency);
      solved = n = 0;
      latency = 0.0;
    }
    current = r.provider;
    ++n;
    solved += r.solved ? 1 : 0;
    latency += r.latency_s;
    std::string path = std::string(kDash);
    if (r.gt_length) {
      path = std::to_string(*r.gt_length) + " -> " +
             (r.pred_length ? std::to_string(*r.pred_length) : std::string(kDash));
    }
    std::string verdict;
    if (r.solved) {
      verdict = format == Format::Markdown ? "✓" : "yes";
    } else if (r.partial) {
      verdict = format == Format::Markdown ? "△" : "partial";
    } else {
      verdict = format == Format::Markdown ? "" : "no";
    }
    t.rows.push_back({r.provider, r.maze_id, mark(r.gt_reachable), mark(r.pred_reachable), path, verdict,
                      format_latency(r.latency_s)});
  }
  if (n > 0) flush_total(current, solved, n, latency);
  return render(t, format);
}

}  // namespace gridmaze::report
