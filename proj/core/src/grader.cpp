#include "gridmaze/grader.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>

#include "gridmaze/errors.hpp"
#include "gridmaze/serialization.hpp"

namespace gridmaze {
namespace {

using nlohmann::json;

// End index (inclusive) of the balanced object starting at `open`, or npos.
std::size_t match_object(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::string_view::npos;
}

std::string upper_trim(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '"' && c != '\'') {
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

Move parse_move_token(std::string_view token) {
  const std::string t = upper_trim(token);
  if (t == "U" || t == "UP") return Move::U;
  if (t == "D" || t == "DOWN") return Move::D;
  if (t == "L" || t == "LEFT") return Move::L;
  if (t == "R" || t == "RIGHT") return Move::R;
  throw ParseFailure("path token '" + std::string(token) + "' is not one of U, D, L, R");
}

MovePath parse_path_string(std::string_view s) {
  constexpr std::string_view kSeparators = ", ;|->\t\n";
  MovePath path;
  if (s.find_first_of(kSeparators) == std::string_view::npos) {
    for (char c : s) path.push_back(parse_move_token(std::string_view(&c, 1)));
    return path;
  }
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t j = s.find_first_of(kSeparators, i);
    const auto token = s.substr(i, j == std::string_view::npos ? s.npos : j - i);
    if (!token.empty()) path.push_back(parse_move_token(token));
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return path;
}

std::optional<int> parse_length(const json& v) {
  if (v.is_null()) return std::nullopt;
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d) return static_cast<int>(d);
  }
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      return std::stoi(s);
    }
  }
  throw ParseFailure("path_length is not an integer: " + v.dump());
}

std::optional<std::pair<int, int>> parse_grid_size(const json& v) {
  if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
    return std::pair{v[0].get<int>(), v[1].get<int>()};
  }
  if (v.is_string()) {
    static const std::regex kDims(R"(\s*(\d+)\s*[xX*,]\s*(\d+)\s*)");
    std::smatch m;
    const auto& s = v.get_ref<const std::string&>();
    if (std::regex_match(s, m, kDims)) return std::pair{std::stoi(m[1]), std::stoi(m[2])};
  }
  return std::nullopt;
}

bool read_flag(const json& obj, const char* key, bool required) {
  if (!obj.contains(key) || obj[key].is_null()) {
    if (required) throw ParseFailure(std::string("missing \"") + key + "\"");
    return false;
  }
  const auto& v = obj[key];
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    const std::string s = upper_trim(v.get<std::string>());
    if (s == "TRUE") return true;
    if (s == "FALSE") return false;
  }
  throw ParseFailure(std::string("\"") + key + "\" is not a boolean");
}

SolverResponse from_object(const json& obj, std::string_view raw) {
  SolverResponse r;
  r.raw_text = std::string(raw);
  r.reachable = read_flag(obj, "reachable", true);
  r.start_found = read_flag(obj, "start_found", false);
  r.goal_found = read_flag(obj, "goal_found", false);
  if (obj.contains("grid_size")) r.grid_size = parse_grid_size(obj["grid_size"]);
  if (obj.contains("path_length")) r.path_length = parse_length(obj["path_length"]);
  if (obj.contains("path") && !obj["path"].is_null()) {
    const auto& p = obj["path"];
    if (p.is_string()) {
      r.path = parse_path_string(p.get_ref<const std::string&>());
    } else if (p.is_array()) {
      MovePath path;
      for (const auto& tok : p) {
        if (!tok.is_string()) throw ParseFailure("path element is not a string: " + tok.dump());
        path.push_back(parse_move_token(tok.get_ref<const std::string&>()));
      }
      r.path = std::move(path);
    } else {
      throw ParseFailure("path is neither an array nor a string");
    }
  }
  return r;
}

}  // namespace

SolverResponse parse_response(std::string_view raw) {
  bool saw_brace = false;
  std::optional<ParseFailure> field_error;
  for (std::size_t open = raw.find('{'); open != std::string_view::npos; open = raw.find('{', open + 1)) {
    saw_brace = true;
    const std::size_t close = match_object(raw, open);
    if (close == std::string_view::npos) continue;
    const json obj = json::parse(raw.substr(open, close - open + 1), nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) continue;
    // A nested object without the answer keys (e.g. inside prose) is skipped.
    if (!obj.contains("reachable") && !obj.contains("path")) continue;
    try {
      return from_object(obj, raw);
    } catch (const ParseFailure& ex) {
      if (!field_error) field_error = ex;
    }
  }
  if (field_error) throw *field_error;
  throw ParseFailure(saw_brace ? "malformed JSON answer" : "no JSON object in response");
}

std::optional<bool> salvage_reachability(std::string_view raw) {
  static const std::regex kReach(R"re("reachable"\s*:\s*(true|false))re", std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(raw.begin(), raw.end(), m, kReach)) return std::nullopt;
  const std::string v = upper_trim(std::string_view(&*m[1].first, static_cast<std::size_t>(m[1].length())));
  return v == "TRUE";
}

std::string_view to_string(GradingMode mode) noexcept {
  return mode == GradingMode::Simulate ? "simulate" : "annotation-match";
}

GradingMode grading_mode_from_string(std::string_view name) {
  if (name == "annotation-match") return GradingMode::AnnotationMatch;
  if (name == "simulate") return GradingMode::Simulate;
  throw ConfigError("unknown grading mode '" + std::string(name) + "'");
}

Verdict grade(const SolverResponse& response, const Annotation& annotation, const MazeGrid& grid,
              GradingMode mode) {
  Verdict v;
  v.mode = mode;
  if (!annotation.reachable) {
    v.reach_correct = !response.reachable;
    v.solved = v.reach_correct && (!response.path || response.path->empty());
    return v;
  }

  v.reach_correct = response.reachable;
  std::optional<int> length = response.path_length;
  if (!length && response.path) {
    length = static_cast<int>(response.path->size());
    v.length_inferred = true;
  }
  v.length_correct = length.has_value() && *length == *annotation.shortest_len;

  bool path_ok = false;
  if (response.path) {
    if (mode == GradingMode::AnnotationMatch) {
      path_ok = std::find(annotation.accepted_paths.begin(), annotation.accepted_paths.end(),
                          *response.path) != annotation.accepted_paths.end();
    } else {
      const auto sim = simulate_path(grid, *response.path);
      path_ok = sim.reaches_goal && static_cast<int>(sim.steps_taken) == *annotation.shortest_len;
    }
  }
  v.path_valid = path_ok;
  v.solved = v.reach_correct && *v.length_correct && path_ok;
  return v;
}

Verdict grade_unusable(std::optional<bool> salvaged_reachable, const Annotation& annotation,
                       GradingMode mode) {
  Verdict v;
  v.mode = mode;
  v.truncated_output = true;
  v.reach_correct = salvaged_reachable.has_value() && *salvaged_reachable == annotation.reachable;
  if (annotation.reachable) {
    v.length_correct = false;
    v.path_valid = false;
  }
  return v;
}

void to_json(json& j, const SolverResponse& r) {
  j = json{{"grid_size", nullptr},
           {"start_found", r.start_found},
           {"goal_found", r.goal_found},
           {"reachable", r.reachable},
           {"path_length", nullptr},
           {"path", nullptr},
           {"raw_text", r.raw_text}};
  if (r.grid_size) j["grid_size"] = json::array({r.grid_size->first, r.grid_size->second});
  if (r.path_length) j["path_length"] = *r.path_length;
  if (r.path) j["path"] = *r.path;
}

void from_json(const json& j, SolverResponse& r) {
  r.grid_size = std::nullopt;
  if (j.contains("grid_size") && !j["grid_size"].is_null()) {
    r.grid_size = std::pair{j["grid_size"][0].get<int>(), j["grid_size"][1].get<int>()};
  }
  r.start_found = j.at("start_found").get<bool>();
  r.goal_found = j.at("goal_found").get<bool>();
  r.reachable = j.at("reachable").get<bool>();
  r.path_length = j.at("path_length").is_null() ? std::nullopt : std::optional<int>(j["path_length"].get<int>());
  r.path = j.at("path").is_null() ? std::nullopt : std::optional<MovePath>(j["path"].get<MovePath>());
  r.raw_text = j.value("raw_text", std::string{});
}

void to_json(json& j, const Verdict& v) {
  j = json{{"solved", v.solved},
           {"reach_correct", v.reach_correct},
           {"length_correct", nullptr},
           {"path_valid", nullptr},
           {"mode", std::string(to_string(v.mode))},
           {"truncated_output", v.truncated_output},
           {"length_inferred", v.length_inferred}};
  if (v.length_correct) j["length_correct"] = *v.length_correct;
  if (v.path_valid) j["path_valid"] = *v.path_valid;
}

void from_json(const json& j, Verdict& v) {
  v.solved = j.at("solved").get<bool>();
  v.reach_correct = j.at("reach_correct").get<bool>();
  v.length_correct = j.at("length_correct").is_null() ? std::nullopt : std::optional<bool>(j["length_correct"].get<bool>());
  v.path_valid = j.at("path_valid").is_null() ? std::nullopt : std::optional<bool>(j["path_valid"].get<bool>());
  v.mode = grading_mode_from_string(j.at("mode").get<std::string>());
  v.truncated_output = j.at("truncated_output").get<bool>();
  v.length_inferred = j.value("length_inferred", false);
}

}  // namespace gridmaze
