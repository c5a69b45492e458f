#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gridmaze/grid.hpp"

namespace gridmaze {

inline constexpr std::size_t kMaxAcceptedPaths = 50;

// Ground truth for one maze.
struct Annotation {
  bool reachable = false;
  std::optional<int> shortest_len;
  // Distinct optimal move sequences in U<D<L<R lexicographic order, at most
  // kMaxAcceptedPaths of them.
  std::vector<MovePath> accepted_paths;
  // More optimal paths exist than were retained.
  bool optimal_count_truncated = false;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

inline constexpr int kUnreached = -1;

// BFS distance (in moves) from `from` to every cell over Open cells;
// kUnreached where no path exists. Indexed by MazeGrid::index.
std::vector<int> bfs_distances(const MazeGrid& grid, Position from);

bool is_reachable(const MazeGrid& grid);

// Multi-parent BFS from the start. shortest_len is always exact; only the
// enumeration of paths is capped.
Annotation analyze(const MazeGrid& grid);

// Total number of distinct optimal paths, saturating at UINT64_MAX.
std::uint64_t count_optimal_paths(const MazeGrid& grid);

inline constexpr std::size_t kDefaultOracleCells = 49;

// Independent oracle for analyze(): all-pairs distances by Floyd-Warshall,
// then exhaustive DFS over every move at every step (depth bounded by the
// all-pairs distance), explicit set-based deduplication and sorting.
// Throws TooLarge when rows*cols > max_cells.
Annotation brute_force_oracle(const MazeGrid& grid, std::size_t max_cells = kDefaultOracleCells);

// Number of optimal paths found by the same exhaustive enumeration, uncapped.
std::uint64_t brute_force_path_count(const MazeGrid& grid,
                                     std::size_t max_cells = kDefaultOracleCells);

}  // namespace gridmaze
