#pragma once

#include <nlohmann/json.hpp>

#include "gridmaze/generator.hpp"
#include "gridmaze/grid.hpp"
#include "gridmaze/pathfinder.hpp"

// nlohmann::json converters for the shared value types. Paths serialize as
// arrays of single-letter strings, e.g. ["U","R","R"].
namespace gridmaze {

void to_json(nlohmann::json& j, Move m);
void from_json(const nlohmann::json& j, Move& m);

void to_json(nlohmann::json& j, Palette p);
void from_json(const nlohmann::json& j, Palette& p);

void to_json(nlohmann::json& j, const Annotation& a);
void from_json(const nlohmann::json& j, Annotation& a);

void to_json(nlohmann::json& j, const MazeSpec& s);
void from_json(const nlohmann::json& j, MazeSpec& s);

}  // namespace gridmaze
