#include <filesystem>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "gridmaze/dataset.hpp"
#include "gridmaze/errors.hpp"
#include "gridmaze/serialization.hpp"

using namespace gridmaze;
namespace fs = std::filesystem;

namespace {

const Manifest& default_manifest() {
  static const Manifest m = assemble_benchmark(default_benchmark_config(), 2026);
  return m;
}

std::vector<const ManifestEntry*> group(const Manifest& m, char g) {
  std::vector<const ManifestEntry*> out;
  for (const auto& e : m.entries) {
    if (e.group_id == g) out.push_back(&e);
  }
  return out;
}

// Cells where two grids differ.
std::vector<Position> diff(const MazeGrid& a, const MazeGrid& b) {
  std::vector<Position> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.cells()[i] != b.cells()[i]) out.push_back(a.position(i));
  }
  return out;
}

std::vector<GroupSpec> small_config() {
  GroupSpec g;
  g.group_id = 'A';
  g.count = 4;
  g.sizes = {5, 7};
  g.densities = {0.1};
  g.unreachable_count = 1;
  return {g};
}

}  // namespace

TEST(Dataset, DefaultGroupCounts) {
  const Manifest& m = default_manifest();
  ASSERT_EQ(m.entries.size(), 110u);
  std::map<char, int> counts;
  for (const auto& e : m.entries) ++counts[e.group_id];
  const std::map<char, int> expected{{'A', 8}, {'B', 15}, {'C', 15}, {'D', 12}, {'E', 14},
                                     {'F', 10}, {'G', 16}, {'H', 10}, {'X', 10}};
  EXPECT_EQ(counts, expected);
}

TEST(Dataset, IdsSequentialInGroupOrder) {
  const Manifest& m = default_manifest();
  char last = 'A';
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    EXPECT_EQ(m.entries[i].maze_id, format_maze_id(static_cast<int>(i) + 1));
    EXPECT_EQ(m.entries[i].image_path, "images/" + m.entries[i].maze_id + ".png");
    EXPECT_GE(m.entries[i].group_id, last);
    last = m.entries[i].group_id;
  }
  EXPECT_EQ(format_maze_id(7), "gen_maze_007");
  EXPECT_EQ(format_maze_id(110), "gen_maze_110");
}

TEST(Dataset, UnreachableQuotas) {
  const Manifest& m = default_manifest();
  int core = 0;
  int x = 0;
  std::map<char, int> per_group;
  for (const auto& e : m.entries) {
    if (e.annotation.reachable) continue;
    ++per_group[e.group_id];
    (e.group_id == 'X' ? x : core)++;
  }
  EXPECT_EQ(core, 28);
  EXPECT_EQ(x, 3);
  EXPECT_EQ(per_group['E'], 14);
  EXPECT_EQ(per_group['B'], 4);
  EXPECT_EQ(per_group['C'], 4);
  EXPECT_EQ(per_group['G'], 6);
}

TEST(Dataset, ShortestLengthRanges) {
  for (const auto& e : default_manifest().entries) {
    if (!e.annotation.reachable) continue;
    EXPECT_GE(*e.annotation.shortest_len, 4) << e.maze_id;
    EXPECT_LE(*e.annotation.shortest_len, 42) << e.maze_id;
    if (e.group_id == 'X') {
      EXPECT_GE(*e.annotation.shortest_len, 28) << e.maze_id;
      EXPECT_EQ(e.grid.rows(), 20);
    }
  }
}

TEST(Dataset, AnnotationsRevalidate) {
  for (const auto& e : default_manifest().entries) {
    EXPECT_EQ(analyze(e.grid), e.annotation) << e.maze_id;
    EXPECT_EQ(e.annotation.reachable, e.spec.reachable_target) << e.maze_id;
    for (const auto& p : e.annotation.accepted_paths) EXPECT_TRUE(simulate_path(e.grid, p).reaches_goal);
    if (!e.annotation.reachable && e.grid.size() <= kDefaultOracleCells) {
      EXPECT_FALSE(brute_force_oracle(e.grid).reachable);
    }
  }
}

TEST(Dataset, GroupDPairsDifferOnlyByTraps) {
  const auto d = group(default_manifest(), 'D');
  ASSERT_EQ(d.size(), 12u);
  for (std::size_t i = 0; i < d.size(); i += 2) {
    const auto& control = *d[i];
    const auto& treatment = *d[i + 1];
    ASSERT_TRUE(control.pair_id);
    EXPECT_EQ(control.pair_id, treatment.pair_id);
    EXPECT_EQ(control.grid.count(CellKind::Trap), 0);
    EXPECT_GT(treatment.grid.count(CellKind::Trap), 0);
    EXPECT_EQ(control.grid.start(), treatment.grid.start());
    EXPECT_EQ(control.grid.goal(), treatment.grid.goal());
    for (Position p : diff(control.grid, treatment.grid)) {
      EXPECT_EQ(control.grid.at(p), CellKind::Open);
      EXPECT_EQ(treatment.grid.at(p), CellKind::Trap);
    }
  }
}

TEST(Dataset, GroupFPairsDifferOnlyByRing) {
  const auto f = group(default_manifest(), 'F');
  ASSERT_EQ(f.size(), 10u);
  for (std::size_t i = 0; i < f.size(); i += 2) {
    const auto& open = *f[i];
    const auto& walled = *f[i + 1];
    EXPECT_EQ(open.pair_id, walled.pair_id);
    EXPECT_FALSE(open.grid.has_border_walls());
    EXPECT_TRUE(walled.grid.has_border_walls());
    const auto cells = diff(open.grid, walled.grid);
    EXPECT_FALSE(cells.empty());
    for (Position p : cells) EXPECT_TRUE(open.grid.on_outer_ring(p));
  }
}

TEST(Dataset, GroupHSharesStructuresAcrossPalettes) {
  const auto h = group(default_manifest(), 'H');
  ASSERT_EQ(h.size(), 10u);
  std::map<std::string, std::set<Palette>> palettes_per_structure;
  for (const auto* e : h) palettes_per_structure[export_text_grid(e->grid)].insert(e->spec.palette);
  EXPECT_EQ(palettes_per_structure.size(), 3u);
  for (const auto& [grid, palettes] : palettes_per_structure) EXPECT_GE(palettes.size(), 2u);
}

TEST(Dataset, GroupAStraightLines) {
  for (const auto* e : group(default_manifest(), 'A')) {
    const Position s = e->grid.start();
    const Position g = e->grid.goal();
    EXPECT_TRUE(s.row == g.row || s.col == g.col) << e->maze_id;
    EXPECT_EQ(*e->annotation.shortest_len, manhattan(s, g));
  }
}

TEST(Dataset, GroupGHasBordersAndTraps) {
  for (const auto* e : group(default_manifest(), 'G')) {
    EXPECT_TRUE(e->grid.has_border_walls()) << e->maze_id;
    EXPECT_GE(e->grid.count(CellKind::Trap), 2);
  }
}

TEST(Dataset, AssemblyIsPure) {
  const auto cfg = small_config();
  EXPECT_EQ(assemble_benchmark(cfg, 5), assemble_benchmark(cfg, 5));
  EXPECT_NE(assemble_benchmark(cfg, 5), assemble_benchmark(cfg, 6));
}

TEST(Dataset, ImpossibleConstraintsFail) {
  auto cfg = small_config();
  cfg[0].min_shortest = 40;
  cfg[0].max_shortest = 42;
  EXPECT_THROW(assemble_benchmark(cfg, 1, AssemblyOptions{50}), AssemblyFailed);
}

TEST(Dataset, InvalidGroupSpec) {
  auto cfg = small_config();
  cfg[0].count = 0;
  EXPECT_THROW(assemble_benchmark(cfg, 1), AssemblyFailed);
}

TEST(Manifest, JsonRoundTrip) {
  const Manifest m = assemble_benchmark(small_config(), 3);
  EXPECT_EQ(manifest_from_json(manifest_to_json(m)), m);
  EXPECT_EQ(manifest_from_json(manifest_to_json(default_manifest())), default_manifest());
}

TEST(Manifest, FileRoundTripWithImages) {
  Manifest m = assemble_benchmark(small_config(), 3);
  const fs::path root = fs::temp_directory_path() / "gridmaze_dataset_test";
  fs::remove_all(root);
  render_images(m, root);
  write_manifest(m, root / "manifest.json");
  const Manifest loaded = load_manifest(root / "manifest.json");
  EXPECT_EQ(loaded, m);
  for (const auto& e : loaded.entries) EXPECT_TRUE(e.image_sha256);
  EXPECT_TRUE(verify_images(loaded, root).empty());
  fs::remove(root / m.entries[0].image_path);
  EXPECT_EQ(verify_images(loaded, root), std::vector<std::string>{m.entries[0].maze_id});
  fs::remove_all(root);
}

TEST(Manifest, TamperedAnnotationRejected) {
  const Manifest m = assemble_benchmark(small_config(), 3);
  auto j = manifest_to_json(m);
  for (auto& e : j["entries"]) {
    if (!e["annotation"]["shortest_len"].is_null()) {
      e["annotation"]["shortest_len"] = e["annotation"]["shortest_len"].get<int>() + 1;
      break;
    }
  }
  EXPECT_THROW(manifest_from_json(j), ManifestCorrupt);
  auto bad = manifest_to_json(m);
  bad.erase("entries");
  EXPECT_THROW(manifest_from_json(bad), ManifestCorrupt);
}

TEST(Manifest, EmptyIsValid) {
  Manifest m;
  m.master_seed = 9;
  EXPECT_EQ(manifest_from_json(manifest_to_json(m)), m);
}
