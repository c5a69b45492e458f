#include "gridmaze/generator.hpp"

#include <cmath>
#include <vector>

#include "gridmaze/errors.hpp"

namespace gridmaze {

std::string_view to_string(Palette palette) noexcept {
  switch (palette) {
    case Palette::Forest: return "forest";
    case Palette::Desert: return "desert";
    case Palette::Dungeon: return "dungeon";
    case Palette::Meadow: return "meadow";
  }
  return "?";
}

Palette palette_from_string(std::string_view name) {
  for (Palette p : kAllPalettes) {
    if (to_string(p) == name) return p;
  }
  throw InvalidSpec("unknown palette '" + std::string(name) + "'");
}

void MazeSpec::validate() const {
  auto dim_ok = [](int d) { return d >= kMinMazeDim && d <= kMaxMazeDim; };
  if (!dim_ok(rows) || !dim_ok(cols)) {
    throw InvalidSpec("grid size " + std::to_string(rows) + "x" + std::to_string(cols) +
                      " outside [5,20]");
  }
  if (!(wall_density >= 0.0 && wall_density <= kMaxWallDensity)) {
    throw InvalidSpec("wall density " + std::to_string(wall_density) + " outside [0,0.55]");
  }
  if (trap_count < 0) throw InvalidSpec("negative trap count");
}

namespace {

struct EdgeLine {
  int near;   // row/col index of the first edge line
  int far;    // row/col index of the opposite edge line
  int lo;     // first usable coordinate along the edge
  int hi;     // last usable coordinate along the edge
};

std::vector<Endpoints> endpoint_pairs(const MazeSpec& spec, bool horizontal, int min_dist) {
  const int inset = spec.reserves_ring() ? 1 : 0;
  const int across = horizontal ? spec.cols : spec.rows;  // dimension crossed
  const int along = horizontal ? spec.rows : spec.cols;   // dimension of the edge
  const EdgeLine line{inset, across - 1 - inset, inset, along - 1 - inset};
  std::vector<Endpoints> pairs;
  if (line.far <= line.near || line.hi < line.lo) return pairs;
  for (int a = line.lo; a <= line.hi; ++a) {
    for (int b = line.lo; b <= line.hi; ++b) {
      const Position p = horizontal ? Position{a, line.near} : Position{line.near, a};
      const Position q = horizontal ? Position{b, line.far} : Position{line.far, b};
      if (manhattan(p, q) >= min_dist) pairs.push_back({p, q});
    }
  }
  return pairs;
}

bool in_ring(const MazeSpec& spec, Position p) {
  return p.row == 0 || p.col == 0 || p.row == spec.rows - 1 || p.col == spec.cols - 1;
}

// Converts cells in visiting order until `target` conversions succeed. A
// conversion that disconnects start and goal is reverted when `keep_reachable`.
int place_with_revert(MazeGrid& grid, const std::vector<Position>& order, CellKind kind,
                      int target, bool keep_reachable) {
  int placed = 0;
  for (const Position& p : order) {
    if (placed >= target) break;
    grid.set(p, kind);
    if (keep_reachable && !is_reachable(grid)) {
      grid.set(p, CellKind::Open);
      continue;
    }
    ++placed;
  }
  return placed;
}

}  // namespace

Endpoints place_endpoints(const MazeSpec& spec, Rng& rng) {
  spec.validate();
  const int min_dist = min_endpoint_distance(spec.rows, spec.cols);
  const bool horizontal_first = rng.bernoulli(0.5);
  const bool start_on_near = rng.bernoulli(0.5);
  for (bool horizontal : {horizontal_first, !horizontal_first}) {
    auto pairs = endpoint_pairs(spec, horizontal, min_dist);
    if (pairs.empty()) continue;
    Endpoints e = pairs[static_cast<std::size_t>(rng.below(pairs.size()))];
    if (!start_on_near) std::swap(e.start, e.goal);
    return e;
  }
  throw PlacementImpossible("no endpoint pair at distance >= " + std::to_string(min_dist) +
                            " on a " + std::to_string(spec.rows) + "x" +
                            std::to_string(spec.cols) + " grid");
}

int wall_target(double density, int candidates) {
  return static_cast<int>(std::lround(density * static_cast<double>(candidates)));
}

MazeInstance generate(const MazeSpec& spec) {
  spec.validate();

  Rng endpoint_rng(spec.seed, "endpoints");
  const Endpoints ends = place_endpoints(spec, endpoint_rng);
  MazeGrid grid(spec.rows, spec.cols, ends.start, ends.goal);

  // The reserved ring is walled during placement so reachability checks
  // never route through it, whether or not it stays walled.
  std::vector<Position> candidates;
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const Position p{r, c};
      if (spec.reserves_ring() && in_ring(spec, p)) {
        grid.set(p, CellKind::Wall);
        continue;
      }
      if (p == ends.start || p == ends.goal) continue;
      candidates.push_back(p);
    }
  }

  MazeInstance inst{.id = {},
                    .spec = spec,
                    .grid = grid,
                    .annotation = {},
                    .achieved_wall_count = 0,
                    .candidate_count = static_cast<int>(candidates.size()),
                    .seal_wall_count = 0};

  const int target = wall_target(spec.wall_density, inst.candidate_count);
  std::vector<Position> wall_order = candidates;
  Rng wall_rng(spec.seed, "walls");
  wall_rng.shuffle(std::span<Position>(wall_order));
  inst.achieved_wall_count =
      place_with_revert(grid, wall_order, CellKind::Wall, target, spec.reachable_target);

  std::vector<Position> trap_order;
  for (const Position& p : candidates) {
    if (grid.at(p) == CellKind::Open) trap_order.push_back(p);
  }
  Rng trap_rng(spec.seed, "traps");
  trap_rng.shuffle(std::span<Position>(trap_order));
  const int traps =
      place_with_revert(grid, trap_order, CellKind::Trap, spec.trap_count, spec.reachable_target);
  if (traps != spec.trap_count) {
    throw GenerationFailed("placed only " + std::to_string(traps) + " of " +
                           std::to_string(spec.trap_count) + " traps");
  }

  if (!spec.border_walls && spec.inset_frame) {
    for (int r = 0; r < spec.rows; ++r) {
      for (int c = 0; c < spec.cols; ++c) {
        if (in_ring(spec, {r, c})) grid.set({r, c}, CellKind::Open);
      }
    }
  }

  if (!spec.reachable_target) {
    const int before = grid.count(CellKind::Wall);
    Rng seal_rng(spec.seed, "seal");
    grid = derive_unreachable(grid, seal_rng);
    inst.seal_wall_count = grid.count(CellKind::Wall) - before;
  }

  inst.grid = std::move(grid);
  inst.annotation = analyze(inst.grid);
  if (inst.annotation.reachable != spec.reachable_target) {
    throw GenerationFailed(spec.reachable_target ? "generated maze is unreachable"
                                                 : "could not make maze unreachable");
  }
  return inst;
}

MazeGrid derive_unreachable(const MazeGrid& grid, Rng& rng) {
  const auto from_goal = bfs_distances(grid, grid.goal());
  const int start_dist = from_goal[grid.index(grid.start())];
  if (start_dist == kUnreached) return grid;

  // Every start->goal path crosses each BFS layer 1..start_dist-1 around the
  // goal, so walling any one of them seals the goal.
  struct Layer {
    int depth;
    int near_start;
    int size;
  };
  std::vector<Layer> layers;
  for (int depth = 1; depth < start_dist; ++depth) layers.push_back({depth, 0, 0});
  if (layers.empty()) {
    throw CannotSeal("start is adjacent to the goal; no separating layer exists");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const int d = from_goal[i];
    if (d < 1 || d >= start_dist) continue;
    Layer& layer = layers[static_cast<std::size_t>(d - 1)];
    ++layer.size;
    if (manhattan(grid.position(i), grid.start()) == 1) ++layer.near_start;
  }

  auto cost_less = [](const Layer& a, const Layer& b) {
    return a.near_start != b.near_start ? a.near_start < b.near_start : a.size < b.size;
  };
  std::vector<Layer> best;
  for (const Layer& layer : layers) {
    if (best.empty() || cost_less(layer, best.front())) {
      best.assign(1, layer);
    } else if (!cost_less(best.front(), layer)) {
      best.push_back(layer);
    }
  }
  const Layer chosen = best[static_cast<std::size_t>(rng.below(best.size()))];

  MazeGrid sealed = grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (from_goal[i] == chosen.depth) sealed.set(grid.position(i), CellKind::Wall);
  }
  if (is_reachable(sealed)) throw CannotSeal("sealing layer did not disconnect the goal");
  return sealed;
}

}  // namespace gridmaze
