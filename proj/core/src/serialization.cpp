#include "gridmaze/serialization.hpp"

#include "gridmaze/errors.hpp"

namespace gridmaze {

void to_json(nlohmann::json& j, Move m) { j = std::string(1, to_char(m)); }

void from_json(const nlohmann::json& j, Move& m) {
  const auto& s = j.get_ref<const std::string&>();
  auto parsed = s.size() == 1 ? move_from_char(s[0]) : std::nullopt;
  if (!parsed) throw ParseFailure("invalid move token '" + s + "'");
  m = *parsed;
}

void to_json(nlohmann::json& j, Palette p) { j = std::string(to_string(p)); }

void from_json(const nlohmann::json& j, Palette& p) {
  p = palette_from_string(j.get_ref<const std::string&>());
}

void to_json(nlohmann::json& j, const Annotation& a) {
  j = nlohmann::json{{"reachable", a.reachable},
                     {"shortest_len", nullptr},
                     {"accepted_paths", a.accepted_paths},
                     {"optimal_count_truncated", a.optimal_count_truncated}};
  if (a.shortest_len) j["shortest_len"] = *a.shortest_len;
}

void from_json(const nlohmann::json& j, Annotation& a) {
  a.reachable = j.at("reachable").get<bool>();
  const auto& len = j.at("shortest_len");
  a.shortest_len = len.is_null() ? std::nullopt : std::optional<int>(len.get<int>());
  a.accepted_paths = j.at("accepted_paths").get<std::vector<MovePath>>();
  a.optimal_count_truncated = j.at("optimal_count_truncated").get<bool>();
}

void to_json(nlohmann::json& j, const MazeSpec& s) {
  j = nlohmann::json{{"rows", s.rows},
                     {"cols", s.cols},
                     {"wall_density", s.wall_density},
                     {"trap_count", s.trap_count},
                     {"border_walls", s.border_walls},
                     {"reachable_target", s.reachable_target},
                     {"palette", s.palette},
                     {"seed", s.seed}};
  if (s.inset_frame) j["inset_frame"] = true;
}

void from_json(const nlohmann::json& j, MazeSpec& s) {
  s.rows = j.at("rows").get<int>();
  s.cols = j.at("cols").get<int>();
  s.wall_density = j.at("wall_density").get<double>();
  s.trap_count = j.at("trap_count").get<int>();
  s.border_walls = j.at("border_walls").get<bool>();
  s.reachable_target = j.at("reachable_target").get<bool>();
  s.palette = j.at("palette").get<Palette>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.inset_frame = j.value("inset_frame", false);
}

}  // namespace gridmaze
