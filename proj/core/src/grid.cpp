#include "gridmaze/grid.hpp"

#include <algorithm>

#include "gridmaze/errors.hpp"

namespace gridmaze {

std::string to_string(Position pos) {
  return "(" + std::to_string(pos.row) + "," + std::to_string(pos.col) + ")";
}

char to_char(Move m) noexcept {
  switch (m) {
    case Move::U: return 'U';
    case Move::D: return 'D';
    case Move::L: return 'L';
    case Move::R: return 'R';
  }
  return '?';
}

std::optional<Move> move_from_char(char c) noexcept {
  switch (c) {
    case 'U': case 'u': return Move::U;
    case 'D': case 'd': return Move::D;
    case 'L': case 'l': return Move::L;
    case 'R': case 'r': return Move::R;
    default: return std::nullopt;
  }
}

Move opposite(Move m) noexcept {
  switch (m) {
    case Move::U: return Move::D;
    case Move::D: return Move::U;
    case Move::L: return Move::R;
    case Move::R: return Move::L;
  }
  return m;
}

std::string to_string(const MovePath& path) {
  std::string out;
  out.reserve(path.size());
  for (Move m : path) out.push_back(to_char(m));
  return out;
}

MazeGrid::MazeGrid(int rows, int cols, Position start, Position goal)
    : MazeGrid(rows, cols,
               std::vector<CellKind>(
                   rows > 0 && cols > 0 ? static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) : 0,
                   CellKind::Open),
               start, goal) {}

MazeGrid::MazeGrid(int rows, int cols, std::vector<CellKind> cells, Position start, Position goal)
    : rows_(rows), cols_(cols), cells_(std::move(cells)), start_(start), goal_(goal) {
  validate();
}

void MazeGrid::validate() const {
  if (rows_ < 1 || cols_ < 1 || rows_ > kMaxGridDim || cols_ > kMaxGridDim) {
    throw InvalidGrid("grid dimensions " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                      " outside [1," + std::to_string(kMaxGridDim) + "]");
  }
  if (cells_.size() != static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_)) {
    throw InvalidGrid("cell count does not match dimensions");
  }
  if (!in_bounds(start_) || !in_bounds(goal_)) throw InvalidGrid("start or goal out of bounds");
  if (start_ == goal_) throw InvalidGrid("start and goal coincide at " + to_string(start_));
  if (!is_passable(cells_[index(start_)])) throw InvalidGrid("start is not on an Open cell");
  if (!is_passable(cells_[index(goal_)])) throw InvalidGrid("goal is not on an Open cell");
}

CellKind MazeGrid::at(Position pos) const {
  if (!in_bounds(pos)) throw OutOfBounds("cell " + to_string(pos) + " outside grid");
  return cells_[index(pos)];
}

void MazeGrid::set(Position pos, CellKind kind) {
  if (!in_bounds(pos)) throw OutOfBounds("cell " + to_string(pos) + " outside grid");
  if (kind != CellKind::Open && (pos == start_ || pos == goal_)) {
    throw InvalidGrid("cannot block start/goal cell " + to_string(pos));
  }
  cells_[index(pos)] = kind;
}

int MazeGrid::count(CellKind kind) const noexcept {
  return static_cast<int>(std::count(cells_.begin(), cells_.end(), kind));
}

bool MazeGrid::has_border_walls() const noexcept {
  for (int c = 0; c < cols_; ++c) {
    if (cells_[index({0, c})] != CellKind::Wall) return false;
    if (cells_[index({rows_ - 1, c})] != CellKind::Wall) return false;
  }
  for (int r = 0; r < rows_; ++r) {
    if (cells_[index({r, 0})] != CellKind::Wall) return false;
    if (cells_[index({r, cols_ - 1})] != CellKind::Wall) return false;
  }
  return true;
}

std::optional<Position> try_move(const MazeGrid& grid, Position pos, Move m) noexcept {
  const Position next = offset(pos, m);
  if (!grid.in_bounds(next)) return std::nullopt;
  return next;
}

Position apply_move(Position pos, Move m, const MazeGrid& grid) {
  if (!grid.in_bounds(pos)) throw OutOfBounds("origin " + to_string(pos) + " outside grid");
  auto next = try_move(grid, pos, m);
  if (!next) {
    throw OutOfBounds("move " + std::string(1, to_char(m)) + " from " + to_string(pos) +
                      " leaves the grid");
  }
  return *next;
}

std::string_view to_string(FailureCause cause) noexcept {
  switch (cause) {
    case FailureCause::OutOfBounds: return "OutOfBounds";
    case FailureCause::HitWall: return "HitWall";
    case FailureCause::HitTrap: return "HitTrap";
    case FailureCause::EndedOffGoal: return "EndedOffGoal";
  }
  return "?";
}

SimulationResult simulate_path(const MazeGrid& grid, std::span<const Move> path) {
  SimulationResult result;
  Position pos = grid.start();
  for (std::size_t i = 0; i < path.size(); ++i) {
    const Position next = offset(pos, path[i]);
    if (!grid.in_bounds(next)) {
      result.steps_taken = i;
      result.failure = SimulationFailure{i, FailureCause::OutOfBounds};
      return result;
    }
    switch (grid.at(next)) {
      case CellKind::Wall:
        result.steps_taken = i;
        result.failure = SimulationFailure{i, FailureCause::HitWall};
        return result;
      case CellKind::Trap:
        result.steps_taken = i;
        result.failure = SimulationFailure{i, FailureCause::HitTrap};
        return result;
      case CellKind::Open:
        break;
    }
    pos = next;
  }
  result.steps_taken = path.size();
  if (pos != grid.goal()) {
    result.failure = SimulationFailure{path.size(), FailureCause::EndedOffGoal};
    return result;
  }
  result.reaches_goal = true;
  return result;
}

std::string export_text_grid(const MazeGrid& grid) {
  std::string out;
  out.reserve(static_cast<std::size_t>(grid.rows()) * static_cast<std::size_t>(grid.cols() + 1));
  for (int r = 0; r < grid.rows(); ++r) {
    if (r > 0) out.push_back('\n');
    for (int c = 0; c < grid.cols(); ++c) {
      const Position pos{r, c};
      if (pos == grid.start()) {
        out.push_back('S');
      } else if (pos == grid.goal()) {
        out.push_back('G');
      } else {
        switch (grid.at(pos)) {
          case CellKind::Open: out.push_back('.'); break;
          case CellKind::Wall: out.push_back('#'); break;
          case CellKind::Trap: out.push_back('T'); break;
        }
      }
    }
  }
  return out;
}

MazeGrid parse_text_grid(std::string_view text) {
  if (!text.empty() && text.back() == '\n') text.remove_suffix(1);
  if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
  if (text.empty()) throw MalformedGrid("empty text grid");

  std::vector<std::string_view> lines;
  std::size_t begin = 0;
  while (true) {
    const std::size_t nl = text.find('\n', begin);
    std::string_view line = text.substr(begin, nl == std::string_view::npos ? text.npos : nl - begin);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    begin = nl + 1;
  }

  const int rows = static_cast<int>(lines.size());
  const int cols = static_cast<int>(lines.front().size());
  if (cols == 0) throw MalformedGrid("empty first row");
  if (rows > kMaxGridDim || cols > kMaxGridDim) throw MalformedGrid("grid too large");

  std::vector<CellKind> cells;
  cells.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  std::optional<Position> start;
  std::optional<Position> goal;
  for (int r = 0; r < rows; ++r) {
    const auto line = lines[static_cast<std::size_t>(r)];
    if (static_cast<int>(line.size()) != cols) {
      throw MalformedGrid("ragged row " + std::to_string(r) + ": expected " + std::to_string(cols) +
                          " symbols, got " + std::to_string(line.size()));
    }
    for (int c = 0; c < cols; ++c) {
      switch (line[static_cast<std::size_t>(c)]) {
        case '.': cells.push_back(CellKind::Open); break;
        case '#': cells.push_back(CellKind::Wall); break;
        case 'T': cells.push_back(CellKind::Trap); break;
        case 'S':
          if (start) throw MalformedGrid("duplicate start");
          start = Position{r, c};
          cells.push_back(CellKind::Open);
          break;
        case 'G':
          if (goal) throw MalformedGrid("duplicate goal");
          goal = Position{r, c};
          cells.push_back(CellKind::Open);
          break;
        default:
          throw MalformedGrid("unknown symbol '" + std::string(1, line[static_cast<std::size_t>(c)]) +
                              "' at " + to_string(Position{r, c}));
      }
    }
  }
  if (!start) throw MalformedGrid("missing start (S)");
  if (!goal) throw MalformedGrid("missing goal (G)");
  return MazeGrid(rows, cols, std::move(cells), *start, *goal);
}

}  // namespace gridmaze
