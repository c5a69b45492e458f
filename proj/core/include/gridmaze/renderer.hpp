#pragma once

#include <cstdint>
#include <vector>

#include "gridmaze/generator.hpp"
#include "gridmaze/grid.hpp"
#include "gridmaze/png.hpp"

namespace gridmaze {

inline constexpr int kImageSize = 1024;

struct Layout {
  int tile_px = 0;
  int offset_x = 0;
  int offset_y = 0;

  friend bool operator==(const Layout&, const Layout&) = default;
};

// Square tiles of floor(1024 / max(rows, cols)) pixels, centered.
Layout compute_layout(int rows, int cols);

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct PaletteColors {
  Rgb background;
  Rgb floor;
  Rgb floor_accent;
  Rgb wall;
  Rgb wall_mortar;
  Rgb trap;
  Rgb trap_spike;
  Rgb player_body;
  Rgb player_head;
  Rgb treasure;
  Rgb treasure_band;
  std::uint64_t sprite_seed = 0;
};

const PaletteColors& palette_colors(Palette palette) noexcept;

// Deterministic in (grid, palette, seed). Texture noise for a tile depends
// only on (seed, row, col) and the tile's kind, so a single-cell edit only
// changes that tile's pixels.
RgbImage render_image(const MazeGrid& grid, Palette palette, std::uint64_t seed);

// render_image encoded as PNG.
std::vector<std::uint8_t> render_png(const MazeGrid& grid, Palette palette, std::uint64_t seed);

// Recovers the grid from a render by classifying the mean color of each
// tile's central patch against reference tiles of the same palette and size.
// Throws ImageError if the image has the wrong size or does not show exactly
// one start and one goal.
MazeGrid read_back_grid(const RgbImage& image, int rows, int cols, Palette palette);

}  // namespace gridmaze
