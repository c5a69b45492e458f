#include "gridmaze/renderer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "gridmaze/errors.hpp"
#include "gridmaze/rng.hpp"

namespace gridmaze {
namespace {

enum class TileClass : std::uint8_t { Floor, Wall, Trap, Start, Goal };
constexpr std::array<TileClass, 5> kTileClasses{TileClass::Floor, TileClass::Wall, TileClass::Trap,
                                                TileClass::Start, TileClass::Goal};

constexpr PaletteColors kForest{
    .background = {18, 32, 18},
    .floor = {92, 140, 62},
    .floor_accent = {70, 112, 48},
    .wall = {66, 52, 40},
    .wall_mortar = {36, 28, 22},
    .trap = {168, 44, 36},
    .trap_spike = {236, 228, 210},
    .player_body = {46, 96, 214},
    .player_head = {240, 200, 160},
    .treasure = {236, 186, 48},
    .treasure_band = {122, 76, 30},
    .sprite_seed = 0x5EED'F0E5ULL,
};

constexpr PaletteColors kDesert{
    .background = {60, 44, 28},
    .floor = {226, 200, 146},
    .floor_accent = {204, 176, 120},
    .wall = {160, 100, 58},
    .wall_mortar = {108, 66, 38},
    .trap = {190, 36, 48},
    .trap_spike = {250, 240, 220},
    .player_body = {40, 84, 200},
    .player_head = {236, 196, 156},
    .treasure = {246, 204, 40},
    .treasure_band = {110, 60, 24},
    .sprite_seed = 0x5EED'DE5EULL,
};

constexpr PaletteColors kDungeon{
    .background = {12, 12, 16},
    .floor = {84, 84, 96},
    .floor_accent = {68, 68, 80},
    .wall = {136, 122, 104},
    .wall_mortar = {54, 48, 42},
    .trap = {122, 36, 142},
    .trap_spike = {220, 220, 232},
    .player_body = {60, 120, 232},
    .player_head = {232, 196, 164},
    .treasure = {232, 180, 36},
    .treasure_band = {96, 58, 26},
    .sprite_seed = 0x5EED'D0C7ULL,
};

constexpr PaletteColors kMeadow{
    .background = {40, 70, 30},
    .floor = {160, 208, 96},
    .floor_accent = {134, 186, 74},
    .wall = {110, 110, 120},
    .wall_mortar = {68, 68, 76},
    .trap = {214, 56, 70},
    .trap_spike = {255, 240, 130},
    .player_body = {36, 70, 190},
    .player_head = {244, 206, 170},
    .treasure = {250, 196, 30},
    .treasure_band = {130, 80, 34},
    .sprite_seed = 0x5EED'3EADULL,
};

std::uint8_t clamp_channel(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

Rgb shade(Rgb c, int delta) {
  return {clamp_channel(c.r + delta), clamp_channel(c.g + delta), clamp_channel(c.b + delta)};
}

// Signed noise in [-amp, amp] from a per-tile seed and pixel coordinates.
int noise(std::uint64_t seed, int u, int v, int amp) {
  const std::uint64_t h = splitmix64(seed ^ (static_cast<std::uint64_t>(u) * 0x9E3779B1ULL +
                                            static_cast<std::uint64_t>(v) * 0x85EBCA77ULL));
  return static_cast<int>(h % static_cast<std::uint64_t>(2 * amp + 1)) - amp;
}

class TilePainter {
 public:
  TilePainter(RgbImage& image, int x0, int y0, int tile, const PaletteColors& colors, std::uint64_t seed)
      : image_(image), x0_(x0), y0_(y0), tile_(tile), colors_(colors), seed_(seed) {}

  void paint(TileClass cls) {
    switch (cls) {
      case TileClass::Floor: floor(); break;
      case TileClass::Wall: wall(); break;
      case TileClass::Trap: trap(); break;
      case TileClass::Start: floor(); player(); break;
      case TileClass::Goal: floor(); treasure(); break;
    }
  }

 private:
  void put(int u, int v, Rgb c) {
    std::uint8_t* px = image_.at(x0_ + u, y0_ + v);
    px[0] = c.r;
    px[1] = c.g;
    px[2] = c.b;
  }

  double frac(int u) const { return (u + 0.5) / tile_; }

  void floor() {
    for (int v = 0; v < tile_; ++v) {
      for (int u = 0; u < tile_; ++u) {
        const std::uint64_t h = splitmix64(seed_ ^ (static_cast<std::uint64_t>(v) << 20 | static_cast<std::uint64_t>(u)));
        const Rgb base = (h % 19 == 0) ? colors_.floor_accent : colors_.floor;
        put(u, v, shade(base, noise(seed_, u, v, 8)));
      }
    }
  }

  // Staggered bricks with mortar lines and a darker outline.
  void wall() {
    const int outline = std::max(1, tile_ / 24);
    const int mortar = std::max(1, tile_ / 20);
    const int brick_h = std::max(3, tile_ / 4);
    const int brick_w = std::max(4, tile_ / 2);
    for (int v = 0; v < tile_; ++v) {
      const int course = v / brick_h;
      const int stagger = (course % 2) * (brick_w / 2);
      for (int u = 0; u < tile_; ++u) {
        const bool edge = u < outline || v < outline || u >= tile_ - outline || v >= tile_ - outline;
        const bool joint = (v % brick_h) < mortar || ((u + stagger) % brick_w) < mortar;
        if (edge || joint) {
          put(u, v, shade(colors_.wall_mortar, noise(seed_, u, v, 3)));
          continue;
        }
        const int brick = (u + stagger) / brick_w;
        const int brick_shade = noise(seed_ ^ 0xB1C4ULL, brick, course, 10);
        put(u, v, shade(colors_.wall, brick_shade + noise(seed_, u, v, 4)));
      }
    }
  }

  // Hazard base in the trap hue with a 2x2 field of spikes.
  void trap() {
    const int half = tile_ / 2;
    for (int v = 0; v < tile_; ++v) {
      for (int u = 0; u < tile_; ++u) {
        Rgb c = shade(colors_.trap, noise(seed_, u, v, 6));
        const int su = u % std::max(1, half);
        const int sv = v % std::max(1, half);
        const double s = std::max(1, half);
        const double top = 0.15 * s;
        const double y = sv + 0.5;
        if (y > top && y < 0.9 * s) {
          const double half_width = (y - top) * 0.42;
          const double dx = std::abs(su + 0.5 - s / 2.0);
          if (dx <= half_width) {
            c = dx > half_width - 1.0 ? shade(colors_.trap_spike, -70) : colors_.trap_spike;
          }
        }
        put(u, v, c);
      }
    }
  }

  void player() {
    const Rgb dark = shade(colors_.player_body, -90);
    for (int v = 0; v < tile_; ++v) {
      for (int u = 0; u < tile_; ++u) {
        const double fu = frac(u);
        const double fv = frac(v);
        const double hx = fu - 0.5;
        const double hy = fv - 0.28;
        if (hx * hx + hy * hy <= 0.15 * 0.15) {
          const bool eye = std::abs(hy + 0.01) < 0.03 && std::abs(std::abs(hx) - 0.06) < 0.025;
          put(u, v, eye ? dark : colors_.player_head);
        } else if (fu >= 0.28 && fu <= 0.72 && fv >= 0.42 && fv <= 0.86) {
          const bool belt = fv >= 0.64 && fv <= 0.69;
          put(u, v, belt ? dark : shade(colors_.player_body, noise(seed_, u, v, 3)));
        }
      }
    }
  }

  void treasure() {
    const Rgb lid = shade(colors_.treasure, 18);
    for (int v = 0; v < tile_; ++v) {
      for (int u = 0; u < tile_; ++u) {
        const double fu = frac(u);
        const double fv = frac(v);
        if (fu < 0.18 || fu > 0.82 || fv < 0.3 || fv > 0.82) continue;
        Rgb c = fv < 0.45 ? lid : colors_.treasure;
        const bool band = fv >= 0.47 && fv <= 0.54;
        const bool rim = fu < 0.22 || fu > 0.78 || fv > 0.78;
        if (band || rim) c = colors_.treasure_band;
        if (std::abs(fu - 0.5) < 0.05 && fv >= 0.45 && fv <= 0.6) c = shade(colors_.treasure, 40);
        put(u, v, c);
      }
    }
  }

  RgbImage& image_;
  int x0_;
  int y0_;
  int tile_;
  const PaletteColors& colors_;
  std::uint64_t seed_;
};

TileClass classify_cell(const MazeGrid& grid, Position p) {
  if (p == grid.start()) return TileClass::Start;
  if (p == grid.goal()) return TileClass::Goal;
  switch (grid.at(p)) {
    case CellKind::Wall: return TileClass::Wall;
    case CellKind::Trap: return TileClass::Trap;
    case CellKind::Open: break;
  }
  return TileClass::Floor;
}

struct MeanColor {
  double r = 0;
  double g = 0;
  double b = 0;
};

// Mean over the central third of a tile.
MeanColor center_mean(const RgbImage& image, int x0, int y0, int tile) {
  const int lo = tile / 3;
  const int hi = std::max(lo + 1, tile - tile / 3);
  MeanColor m;
  int n = 0;
  for (int v = lo; v < hi; ++v) {
    for (int u = lo; u < hi; ++u) {
      const std::uint8_t* px = image.at(x0 + u, y0 + v);
      m.r += px[0];
      m.g += px[1];
      m.b += px[2];
      ++n;
    }
  }
  m.r /= n;
  m.g /= n;
  m.b /= n;
  return m;
}

}  // namespace

Layout compute_layout(int rows, int cols) {
  if (rows < 1 || cols < 1 || rows > kMaxGridDim || cols > kMaxGridDim) {
    throw InvalidGrid("cannot lay out a " + std::to_string(rows) + "x" + std::to_string(cols) + " grid");
  }
  Layout layout;
  layout.tile_px = kImageSize / std::max(rows, cols);
  layout.offset_x = (kImageSize - layout.tile_px * cols) / 2;
  layout.offset_y = (kImageSize - layout.tile_px * rows) / 2;
  return layout;
}

const PaletteColors& palette_colors(Palette palette) noexcept {
  switch (palette) {
    case Palette::Forest: return kForest;
    case Palette::Desert: return kDesert;
    case Palette::Dungeon: return kDungeon;
    case Palette::Meadow: return kMeadow;
  }
  return kForest;
}

RgbImage render_image(const MazeGrid& grid, Palette palette, std::uint64_t seed) {
  const PaletteColors& colors = palette_colors(palette);
  const Layout layout = compute_layout(grid.rows(), grid.cols());
  RgbImage image(kImageSize, kImageSize);
  for (int y = 0; y < kImageSize; ++y) {
    for (int x = 0; x < kImageSize; ++x) {
      std::uint8_t* px = image.at(x, y);
      px[0] = colors.background.r;
      px[1] = colors.background.g;
      px[2] = colors.background.b;
    }
  }
  for (int r = 0; r < grid.rows(); ++r) {
    for (int c = 0; c < grid.cols(); ++c) {
      const TileClass cls = classify_cell(grid, {r, c});
      const std::uint64_t tile_seed =
          derive_seed(seed ^ colors.sprite_seed, "tile", static_cast<std::uint64_t>(r),
                      static_cast<std::uint64_t>(c) << 8 | static_cast<std::uint64_t>(cls));
      TilePainter(image, layout.offset_x + c * layout.tile_px, layout.offset_y + r * layout.tile_px,
                  layout.tile_px, colors, tile_seed)
          .paint(cls);
    }
  }
  return image;
}

std::vector<std::uint8_t> render_png(const MazeGrid& grid, Palette palette, std::uint64_t seed) {
  return encode_png(render_image(grid, palette, seed));
}

MazeGrid read_back_grid(const RgbImage& image, int rows, int cols, Palette palette) {
  if (image.width != kImageSize || image.height != kImageSize) {
    throw ImageError("expected a 1024x1024 image, got " + std::to_string(image.width) + "x" +
                     std::to_string(image.height));
  }
  const PaletteColors& colors = palette_colors(palette);
  const Layout layout = compute_layout(rows, cols);

  // Reference signature of each tile class at this tile size.
  std::array<MeanColor, kTileClasses.size()> reference;
  {
    RgbImage scratch(layout.tile_px, layout.tile_px);
    for (std::size_t i = 0; i < kTileClasses.size(); ++i) {
      TilePainter(scratch, 0, 0, layout.tile_px, colors, colors.sprite_seed).paint(kTileClasses[i]);
      reference[i] = center_mean(scratch, 0, 0, layout.tile_px);
    }
  }

  std::vector<CellKind> cells;
  cells.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  std::vector<Position> starts;
  std::vector<Position> goals;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const MeanColor m = center_mean(image, layout.offset_x + c * layout.tile_px,
                                      layout.offset_y + r * layout.tile_px, layout.tile_px);
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::max();
      for (std::size_t i = 0; i < reference.size(); ++i) {
        const double dr = m.r - reference[i].r;
        const double dg = m.g - reference[i].g;
        const double db = m.b - reference[i].b;
        const double d = dr * dr + dg * dg + db * db;
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      switch (kTileClasses[best]) {
        case TileClass::Wall: cells.push_back(CellKind::Wall); break;
        case TileClass::Trap: cells.push_back(CellKind::Trap); break;
        case TileClass::Start: starts.push_back({r, c}); cells.push_back(CellKind::Open); break;
        case TileClass::Goal: goals.push_back({r, c}); cells.push_back(CellKind::Open); break;
        case TileClass::Floor: cells.push_back(CellKind::Open); break;
      }
    }
  }
  if (starts.size() != 1 || goals.size() != 1) {
    throw ImageError("readback found " + std::to_string(starts.size()) + " start and " +
                     std::to_string(goals.size()) + " goal tiles");
  }
  return MazeGrid(rows, cols, std::move(cells), starts.front(), goals.front());
}

}  // namespace gridmaze
