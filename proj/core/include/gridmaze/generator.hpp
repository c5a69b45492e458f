#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "gridmaze/grid.hpp"
#include "gridmaze/pathfinder.hpp"
#include "gridmaze/rng.hpp"

namespace gridmaze {

enum class Palette : std::uint8_t { Forest, Desert, Dungeon, Meadow };

inline constexpr std::array<Palette, 4> kAllPalettes{Palette::Forest, Palette::Desert,
                                                     Palette::Dungeon, Palette::Meadow};

std::string_view to_string(Palette palette) noexcept;
// Throws InvalidSpec for unknown names.
Palette palette_from_string(std::string_view name);

inline constexpr int kMinMazeDim = 5;
inline constexpr int kMaxMazeDim = 20;
inline constexpr double kMaxWallDensity = 0.55;

struct MazeSpec {
  int rows = 9;
  int cols = 9;
  double wall_density = 0.0;
  int trap_count = 0;
  bool border_walls = false;
  bool reachable_target = true;
  Palette palette = Palette::Forest;
  std::uint64_t seed = 0;
  // Keep endpoints and obstacles off the outer ring even when the ring is
  // left open. Two specs that differ only in border_walls, both with this
  // set, produce grids that differ only in the ring.
  bool inset_frame = false;

  bool reserves_ring() const noexcept { return border_walls || inset_frame; }

  // Throws InvalidSpec.
  void validate() const;

  friend bool operator==(const MazeSpec&, const MazeSpec&) = default;
};

struct Endpoints {
  Position start;
  Position goal;
};

// floor((rows + cols) / 3)
constexpr int min_endpoint_distance(int rows, int cols) noexcept { return (rows + cols) / 3; }

constexpr int manhattan(Position a, Position b) noexcept {
  return (a.row > b.row ? a.row - b.row : b.row - a.row) +
         (a.col > b.col ? a.col - b.col : b.col - a.col);
}

// Start and goal on opposite edges (left/right or top/bottom, chosen by the
// rng), at least min_endpoint_distance apart. With a reserved ring, the
// endpoints sit on the innermost non-ring line along their edge.
// Throws PlacementImpossible.
Endpoints place_endpoints(const MazeSpec& spec, Rng& rng);

struct MazeInstance {
  std::string id;
  MazeSpec spec;
  MazeGrid grid;
  Annotation annotation;
  // Walls placed by the density phase (excludes border ring and seal walls).
  int achieved_wall_count = 0;
  // Number of cells eligible for density walls.
  int candidate_count = 0;
  // Walls added afterwards to make an unreachable maze.
  int seal_wall_count = 0;

  friend bool operator==(const MazeInstance&, const MazeInstance&) = default;
};

// round(density * candidates), half away from zero.
int wall_target(double density, int candidates);

// Pure function of `spec`: place endpoints, lay the ring, place walls then
// traps in shuffled order reverting any placement that breaks reachability
// (when reachable_target), then seal the goal for unreachable targets.
// Throws InvalidSpec, PlacementImpossible, GenerationFailed.
MazeInstance generate(const MazeSpec& spec);

// Returns `grid` with extra walls on a BFS layer around the goal so the goal
// becomes unreachable. Among all separating layers the one with the fewest
// cells adjacent to the start, then the fewest cells, is chosen; remaining
// ties are broken by `rng`. Already-unreachable grids are returned as-is.
// Throws CannotSeal.
MazeGrid derive_unreachable(const MazeGrid& grid, Rng& rng);

}  // namespace gridmaze
