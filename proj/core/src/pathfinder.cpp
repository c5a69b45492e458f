#include "gridmaze/pathfinder.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

#include "gridmaze/errors.hpp"

namespace gridmaze {
namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

struct ParentStructure {
  std::vector<int> dist;
  // parents[i]: neighbors of cell i at distance dist[i]-1, in U,D,L,R order
  // of the move that leads from the parent to i.
  std::vector<std::vector<std::size_t>> parents;
};

ParentStructure multi_parent_bfs(const MazeGrid& grid) {
  ParentStructure ps;
  ps.dist.assign(grid.size(), kUnreached);
  ps.parents.resize(grid.size());

  std::deque<std::size_t> queue;
  const std::size_t start = grid.index(grid.start());
  ps.dist[start] = 0;
  queue.push_back(start);
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    const Position pos = grid.position(cur);
    for (Move m : kMoveOrder) {
      const Position next = offset(pos, m);
      if (!grid.passable(next)) continue;
      const std::size_t ni = grid.index(next);
      if (ps.dist[ni] == kUnreached) {
        ps.dist[ni] = ps.dist[cur] + 1;
        ps.parents[ni].push_back(cur);
        queue.push_back(ni);
      } else if (ps.dist[ni] == ps.dist[cur] + 1) {
        ps.parents[ni].push_back(cur);
      }
    }
  }
  return ps;
}

// Cells lying on at least one optimal start->goal path.
std::vector<bool> optimal_corridor(const MazeGrid& grid, const ParentStructure& ps) {
  std::vector<bool> on_path(grid.size(), false);
  const std::size_t goal = grid.index(grid.goal());
  if (ps.dist[goal] == kUnreached) return on_path;
  std::vector<std::size_t> stack{goal};
  on_path[goal] = true;
  while (!stack.empty()) {
    const std::size_t cur = stack.back();
    stack.pop_back();
    for (std::size_t p : ps.parents[cur]) {
      if (!on_path[p]) {
        on_path[p] = true;
        stack.push_back(p);
      }
    }
  }
  return on_path;
}

class PathCollector {
 public:
  PathCollector(const MazeGrid& grid, const ParentStructure& ps, const std::vector<bool>& corridor)
      : grid_(grid), ps_(ps), corridor_(corridor), goal_(grid.index(grid.goal())) {}

  std::vector<MovePath> collect(std::size_t limit) {
    limit_ = limit;
    walk(grid_.index(grid_.start()));
    return std::move(paths_);
  }

 private:
  void walk(std::size_t cur) {
    if (paths_.size() >= limit_) return;
    if (cur == goal_) {
      paths_.push_back(prefix_);
      return;
    }
    const Position pos = grid_.position(cur);
    for (Move m : kMoveOrder) {
      const Position next = offset(pos, m);
      if (!grid_.passable(next)) continue;
      const std::size_t ni = grid_.index(next);
      if (!corridor_[ni] || ps_.dist[ni] != ps_.dist[cur] + 1) continue;
      prefix_.push_back(m);
      walk(ni);
      prefix_.pop_back();
      if (paths_.size() >= limit_) return;
    }
  }

  const MazeGrid& grid_;
  const ParentStructure& ps_;
  const std::vector<bool>& corridor_;
  std::size_t goal_;
  std::size_t limit_ = 0;
  MovePath prefix_;
  std::vector<MovePath> paths_;
};

std::uint64_t count_paths(const MazeGrid& grid, const ParentStructure& ps) {
  const std::size_t goal = grid.index(grid.goal());
  if (ps.dist[goal] == kUnreached) return 0;
  // Process cells in BFS-distance order so every parent is final first.
  std::vector<std::size_t> order;
  order.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (ps.dist[i] != kUnreached) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ps.dist[a] < ps.dist[b]; });
  std::vector<std::uint64_t> ways(grid.size(), 0);
  ways[grid.index(grid.start())] = 1;
  for (std::size_t i : order) {
    for (std::size_t p : ps.parents[i]) ways[i] = saturating_add(ways[i], ways[p]);
  }
  return ways[goal];
}

}  // namespace

std::vector<int> bfs_distances(const MazeGrid& grid, Position from) {
  std::vector<int> dist(grid.size(), kUnreached);
  if (!grid.passable(from)) return dist;
  std::deque<Position> queue{from};
  dist[grid.index(from)] = 0;
  while (!queue.empty()) {
    const Position cur = queue.front();
    queue.pop_front();
    const int d = dist[grid.index(cur)];
    for (Move m : kMoveOrder) {
      const Position next = offset(cur, m);
      if (!grid.passable(next)) continue;
      int& slot = dist[grid.index(next)];
      if (slot == kUnreached) {
        slot = d + 1;
        queue.push_back(next);
      }
    }
  }
  return dist;
}

bool is_reachable(const MazeGrid& grid) {
  return bfs_distances(grid, grid.start())[grid.index(grid.goal())] != kUnreached;
}

Annotation analyze(const MazeGrid& grid) {
  const ParentStructure ps = multi_parent_bfs(grid);
  Annotation ann;
  const int goal_dist = ps.dist[grid.index(grid.goal())];
  if (goal_dist == kUnreached) return ann;

  ann.reachable = true;
  ann.shortest_len = goal_dist;
  const auto corridor = optimal_corridor(grid, ps);
  ann.accepted_paths = PathCollector(grid, ps, corridor).collect(kMaxAcceptedPaths);
  ann.optimal_count_truncated = count_paths(grid, ps) > kMaxAcceptedPaths;
  return ann;
}

std::uint64_t count_optimal_paths(const MazeGrid& grid) {
  return count_paths(grid, multi_parent_bfs(grid));
}

namespace {

struct Exhaustive {
  std::set<MovePath> paths;
  std::optional<int> shortest;
};

Exhaustive exhaustive_shortest_paths(const MazeGrid& grid, std::size_t max_cells) {
  const std::size_t n = grid.size();
  if (n > max_cells) {
    throw TooLarge("grid has " + std::to_string(n) + " cells; oracle limit is " +
                   std::to_string(max_cells));
  }

  // Floyd-Warshall over the 4-neighborhood adjacency of Open cells.
  constexpr int kInf = std::numeric_limits<int>::max() / 4;
  std::vector<int> d(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) {
    const Position p = grid.position(i);
    if (!grid.passable(p)) continue;
    d[i * n + i] = 0;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if ((dr == 0) == (dc == 0)) continue;
        const Position q{p.row + dr, p.col + dc};
        if (grid.passable(q)) d[i * n + grid.index(q)] = 1;
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const int dik = d[i * n + k];
      if (dik >= kInf) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const int cand = dik + d[k * n + j];
        if (cand < d[i * n + j]) d[i * n + j] = cand;
      }
    }
  }

  Exhaustive out;
  const std::size_t s = grid.index(grid.start());
  const std::size_t g = grid.index(grid.goal());
  if (d[s * n + g] >= kInf) return out;
  const int bound = d[s * n + g];
  out.shortest = bound;

  // Every move at every step; a branch is abandoned once it can no longer
  // finish within `bound` moves or revisits a cell.
  std::vector<bool> visited(n, false);
  MovePath prefix;
  auto dfs = [&](auto& self, Position pos, int depth) -> void {
    const std::size_t pi = grid.index(pos);
    if (depth == bound) {
      if (pi == g) out.paths.insert(prefix);
      return;
    }
    for (Move m : {Move::R, Move::L, Move::D, Move::U}) {
      const Position next = offset(pos, m);
      if (!grid.in_bounds(next) || !is_passable(grid.at(next))) continue;
      const std::size_t ni = grid.index(next);
      if (visited[ni]) continue;
      const int remaining = d[ni * n + g];
      if (remaining >= kInf || depth + 1 + remaining > bound) continue;
      visited[ni] = true;
      prefix.push_back(m);
      self(self, next, depth + 1);
      prefix.pop_back();
      visited[ni] = false;
    }
  };
  visited[s] = true;
  dfs(dfs, grid.start(), 0);
  return out;
}

}  // namespace

Annotation brute_force_oracle(const MazeGrid& grid, std::size_t max_cells) {
  Exhaustive ex = exhaustive_shortest_paths(grid, max_cells);
  Annotation ann;
  if (!ex.shortest) return ann;
  ann.reachable = true;
  ann.shortest_len = ex.shortest;
  // std::set<vector<Move>> is already ordered lexicographically by U<D<L<R.
  for (const auto& p : ex.paths) {
    if (ann.accepted_paths.size() == kMaxAcceptedPaths) break;
    ann.accepted_paths.push_back(p);
  }
  ann.optimal_count_truncated = ex.paths.size() > kMaxAcceptedPaths;
  return ann;
}

std::uint64_t brute_force_path_count(const MazeGrid& grid, std::size_t max_cells) {
  return exhaustive_shortest_paths(grid, max_cells).paths.size();
}

}  // namespace gridmaze
