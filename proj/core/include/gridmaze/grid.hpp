#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gridmaze {

enum class CellKind : std::uint8_t { Open, Wall, Trap };

// Walls and traps block movement identically; only the rendering differs.
constexpr bool is_passable(CellKind kind) noexcept { return kind == CellKind::Open; }

// Row-major coordinates, origin at the top-left cell.
struct Position {
  int row = 0;
  int col = 0;

  friend constexpr auto operator<=>(const Position&, const Position&) = default;
};

std::string to_string(Position pos);

enum class Move : std::uint8_t { U, D, L, R };

// Canonical expansion order used everywhere a deterministic order matters.
inline constexpr std::array<Move, 4> kMoveOrder{Move::U, Move::D, Move::L, Move::R};

char to_char(Move m) noexcept;
std::optional<Move> move_from_char(char c) noexcept;
Move opposite(Move m) noexcept;

// Neighbor in direction `m` with no bounds check.
constexpr Position offset(Position pos, Move m) noexcept {
  switch (m) {
    case Move::U: return {pos.row - 1, pos.col};
    case Move::D: return {pos.row + 1, pos.col};
    case Move::L: return {pos.row, pos.col - 1};
    case Move::R: return {pos.row, pos.col + 1};
  }
  return pos;
}

using MovePath = std::vector<Move>;

// "RRDD"-style compact rendering, mostly for diagnostics.
std::string to_string(const MovePath& path);

inline constexpr int kMaxGridDim = 64;

// Rectangular maze with one start and one goal overlaid on Open cells.
//
// The cell matrix only holds Open/Wall/Trap; start and goal are positions.
// Whether the grid has a border ring is a property of the cells, not a flag:
// a grid "has border walls" iff every outer-ring cell is a Wall.
class MazeGrid {
 public:
  // All-Open grid.
  MazeGrid(int rows, int cols, Position start, Position goal);
  MazeGrid(int rows, int cols, std::vector<CellKind> cells, Position start, Position goal);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return cells_.size(); }
  Position start() const noexcept { return start_; }
  Position goal() const noexcept { return goal_; }

  bool in_bounds(Position pos) const noexcept {
    return pos.row >= 0 && pos.col >= 0 && pos.row < rows_ && pos.col < cols_;
  }
  std::size_t index(Position pos) const noexcept {
    return static_cast<std::size_t>(pos.row) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(pos.col);
  }
  Position position(std::size_t index) const noexcept {
    return {static_cast<int>(index / static_cast<std::size_t>(cols_)),
            static_cast<int>(index % static_cast<std::size_t>(cols_))};
  }

  CellKind at(Position pos) const;
  bool passable(Position pos) const noexcept {
    return in_bounds(pos) && is_passable(cells_[index(pos)]);
  }

  // Throws InvalidGrid when asked to block the start or goal cell.
  void set(Position pos, CellKind kind);

  std::span<const CellKind> cells() const noexcept { return cells_; }
  int count(CellKind kind) const noexcept;

  bool on_outer_ring(Position pos) const noexcept {
    return pos.row == 0 || pos.col == 0 || pos.row == rows_ - 1 || pos.col == cols_ - 1;
  }
  bool has_border_walls() const noexcept;

  friend bool operator==(const MazeGrid&, const MazeGrid&) = default;

 private:
  void validate() const;

  int rows_;
  int cols_;
  std::vector<CellKind> cells_;
  Position start_;
  Position goal_;
};

// Neighbor of `pos` in direction `m`, or nullopt if it leaves the grid.
std::optional<Position> try_move(const MazeGrid& grid, Position pos, Move m) noexcept;

// Throws OutOfBounds when the destination leaves the grid.
Position apply_move(Position pos, Move m, const MazeGrid& grid);

enum class FailureCause : std::uint8_t { OutOfBounds, HitWall, HitTrap, EndedOffGoal };

std::string_view to_string(FailureCause cause) noexcept;

struct SimulationFailure {
  // Index of the offending move; path.size() for EndedOffGoal.
  std::size_t index = 0;
  FailureCause cause = FailureCause::EndedOffGoal;

  friend bool operator==(const SimulationFailure&, const SimulationFailure&) = default;
};

struct SimulationResult {
  bool reaches_goal = false;
  // Moves executed before stopping; equals path length on success.
  std::size_t steps_taken = 0;
  std::optional<SimulationFailure> failure;
};

SimulationResult simulate_path(const MazeGrid& grid, std::span<const Move> path);

// One line per row using S G . # T, rows joined by '\n', no trailing newline.
std::string export_text_grid(const MazeGrid& grid);

// Inverse of export_text_grid. A single trailing newline (or CRLF line
// endings) is tolerated. Throws MalformedGrid.
MazeGrid parse_text_grid(std::string_view text);

}  // namespace gridmaze
