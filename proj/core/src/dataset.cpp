#include "gridmaze/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "gridmaze/encoding.hpp"
#include "gridmaze/errors.hpp"
#include "gridmaze/renderer.hpp"
#include "gridmaze/serialization.hpp"

namespace gridmaze {

namespace {

bool valid_group_id(char id) { return (id >= 'A' && id <= 'H') || id == 'X'; }

int unit_count(const GroupSpec& g) {
  if (g.pairing != PairRule::None) return g.count / 2;
  if (g.shared_structures > 0) return g.shared_structures;
  return g.count;
}

template <typename T>
const T& block_pick(const std::vector<T>& values, int unit, int units) {
  const auto idx = static_cast<std::size_t>(unit) * values.size() / static_cast<std::size_t>(units);
  return values[idx];
}

std::vector<int> unreachable_entries(const GroupSpec& g) {
  if (!g.unreachable_indices.empty()) return g.unreachable_indices;
  std::vector<int> out;
  for (int k = 0; k < g.unreachable_count; ++k) {
    out.push_back((2 * k + 1) * g.count / (2 * g.unreachable_count));
  }
  return out;
}

struct UnitParams {
  int size = 0;
  double density = 0.0;
  int traps = 0;
  Palette palette = Palette::Forest;
};

UnitParams draw_params(const GroupSpec& g, std::uint64_t master_seed, int unit, int units) {
  Rng rng(derive_seed(master_seed, std::string("params/") + g.group_id, static_cast<std::uint64_t>(unit)));
  UnitParams p;
  p.size = block_pick(g.sizes, unit, units);
  if (!g.densities.empty()) {
    p.density = block_pick(g.densities, unit, units);
  } else {
    const double raw = g.density_min + (g.density_max - g.density_min) * rng.uniform01();
    p.density = std::clamp(std::round(raw * 100.0) / 100.0, g.density_min, g.density_max);
  }
  p.traps = rng.uniform_int(g.trap_min, g.trap_max);
  if (!g.palettes.empty() && g.shared_structures == 0) {
    p.palette = g.palettes[static_cast<std::size_t>(unit) % g.palettes.size()];
  } else {
    p.palette = kAllPalettes[static_cast<std::size_t>(rng.below(kAllPalettes.size()))];
  }
  return p;
}

bool acceptable(const GroupSpec& g, const MazeInstance& inst) {
  if (inst.annotation.reachable) {
    const int len = *inst.annotation.shortest_len;
    if (len < g.min_shortest || len > g.max_shortest) return false;
  }
  if (g.min_achieved_density > 0.0 && inst.candidate_count > 0) {
    const double achieved = static_cast<double>(inst.achieved_wall_count) / inst.candidate_count;
    if (achieved < g.min_achieved_density) return false;
  }
  if (g.straight_line) {
    const Position s = inst.grid.start();
    const Position t = inst.grid.goal();
    if (!inst.annotation.reachable) return false;
    if (s.row != t.row && s.col != t.col) return false;
    if (*inst.annotation.shortest_len != manhattan(s, t)) return false;
  }
  return true;
}

struct Member {
  MazeInstance instance;
  std::optional<std::string> pair_id;
};

// Specs produced by one unit for a given seed, in entry order.
std::vector<MazeSpec> unit_specs(const GroupSpec& g, const UnitParams& p, std::uint64_t seed,
                                 bool reachable) {
  MazeSpec base{.rows = p.size,
                .cols = p.size,
                .wall_density = p.density,
                .trap_count = p.traps,
                .border_walls = g.border_walls,
                .reachable_target = reachable,
                .palette = p.palette,
                .seed = seed,
                .inset_frame = false};
  switch (g.pairing) {
    case PairRule::Traps: {
      MazeSpec control = base;
      control.trap_count = 0;
      return {control, base};
    }
    case PairRule::Border: {
      MazeSpec control = base;
      control.inset_frame = true;
      control.border_walls = false;
      MazeSpec treatment = base;
      treatment.inset_frame = true;
      treatment.border_walls = true;
      return {control, treatment};
    }
    case PairRule::None:
      break;
  }
  return {base};
}

std::vector<Member> build_group(const GroupSpec& g, std::uint64_t master_seed,
                                const AssemblyOptions& options) {
  const int units = unit_count(g);
  const auto unreachable = unreachable_entries(g);
  std::vector<Member> members;
  members.reserve(static_cast<std::size_t>(g.count));

  for (int u = 0; u < units; ++u) {
    const UnitParams params = draw_params(g, master_seed, u, units);
    const bool reachable = std::find(unreachable.begin(), unreachable.end(), u) == unreachable.end() ||
                           g.pairing != PairRule::None || g.shared_structures > 0;
    const std::uint64_t base_seed =
        derive_seed(master_seed, std::string("unit/") + g.group_id, static_cast<std::uint64_t>(u));

    std::vector<MazeInstance> accepted;
    for (int attempt = 0; attempt < options.max_attempts_per_unit && accepted.empty(); ++attempt) {
      std::vector<MazeInstance> trial;
      try {
        for (const MazeSpec& spec : unit_specs(g, params, base_seed + static_cast<std::uint64_t>(attempt), reachable)) {
          trial.push_back(generate(spec));
        }
      } catch (const GenerationFailed&) {
        continue;
      } catch (const PlacementImpossible&) {
        continue;
      } catch (const CannotSeal&) {
        continue;
      }
      if (std::all_of(trial.begin(), trial.end(), [&](const MazeInstance& i) { return acceptable(g, i); })) {
        accepted = std::move(trial);
      }
    }
    if (accepted.empty()) {
      throw AssemblyFailed(std::string("group ") + g.group_id + " unit " + std::to_string(u) +
                           ": no acceptable maze within " + std::to_string(options.max_attempts_per_unit) +
                           " attempts");
    }

    if (g.pairing != PairRule::None) {
      const std::string pair_id = std::string(1, g.group_id) + std::to_string(u + 1);
      for (auto& inst : accepted) members.push_back({std::move(inst), pair_id});
    } else if (g.shared_structures > 0) {
      const int per = static_cast<int>(g.palettes.size());
      for (int k = 0; k < per && static_cast<int>(members.size()) < g.count; ++k) {
        MazeInstance copy = accepted.front();
        copy.spec.palette = g.palettes[static_cast<std::size_t>(k)];
        members.push_back({std::move(copy), std::nullopt});
      }
    } else {
      members.push_back({std::move(accepted.front()), std::nullopt});
    }
  }
  return members;
}

ManifestCorrupt corrupt(const std::string& where, const std::string& what) {
  return ManifestCorrupt(where + ": " + what);
}

}  // namespace

void GroupSpec::validate() const {
  const std::string who = std::string("group ") + group_id;
  if (!valid_group_id(group_id)) throw AssemblyFailed(who + ": id must be one of A-H or X");
  if (count <= 0) throw AssemblyFailed(who + ": count must be positive");
  if (sizes.empty()) throw AssemblyFailed(who + ": no grid sizes");
  for (int s : sizes) {
    if (s < kMinMazeDim || s > kMaxMazeDim) throw AssemblyFailed(who + ": size out of range");
  }
  for (double d : densities) {
    if (d < 0.0 || d > kMaxWallDensity) throw AssemblyFailed(who + ": density out of range");
  }
  if (densities.empty() && (density_min < 0.0 || density_max > kMaxWallDensity || density_min > density_max)) {
    throw AssemblyFailed(who + ": bad density range");
  }
  if (trap_min < 0 || trap_min > trap_max) throw AssemblyFailed(who + ": bad trap range");
  if (pairing != PairRule::None) {
    if (count % 2 != 0) throw AssemblyFailed(who + ": paired groups need an even count");
    if (pairing == PairRule::Traps && trap_min < 1) {
      throw AssemblyFailed(who + ": trap pairs need at least one trap in the treatment");
    }
  }
  if (shared_structures > 0) {
    if (palettes.empty()) throw AssemblyFailed(who + ": shared structures need palettes");
    if (static_cast<std::size_t>(shared_structures) * palettes.size() < static_cast<std::size_t>(count)) {
      throw AssemblyFailed(who + ": not enough structure/palette combinations");
    }
  }
  const bool grouped = pairing != PairRule::None || shared_structures > 0;
  if (grouped && (unreachable_count > 0 || !unreachable_indices.empty())) {
    throw AssemblyFailed(who + ": paired or shared-structure groups must be reachable");
  }
  if (unreachable_indices.empty() && (unreachable_count < 0 || unreachable_count > count)) {
    throw AssemblyFailed(who + ": bad unreachable count");
  }
  for (int i : unreachable_indices) {
    if (i < 0 || i >= count) throw AssemblyFailed(who + ": unreachable index out of range");
  }
  if (min_shortest > max_shortest) throw AssemblyFailed(who + ": bad shortest-path range");
}

std::vector<GroupSpec> default_benchmark_config() {
  std::vector<GroupSpec> groups;

  GroupSpec a;
  a.group_id = 'A';
  a.count = 8;
  a.sizes = {5, 6, 7, 8};
  a.densities = {0.0, 0.05};
  a.straight_line = true;
  groups.push_back(a);

  GroupSpec b;
  b.group_id = 'B';
  b.count = 15;
  b.sizes = {5, 7, 9, 11, 13};
  b.densities = {0.25};
  b.unreachable_count = 4;
  groups.push_back(b);

  GroupSpec c;
  c.group_id = 'C';
  c.count = 15;
  c.sizes = {9};
  c.densities = {0.0, 0.05, 0.15, 0.25, 0.35, 0.45};
  c.unreachable_count = 4;
  groups.push_back(c);

  GroupSpec d;
  d.group_id = 'D';
  d.count = 12;
  d.sizes = {7, 8, 9, 10, 11, 12};
  d.densities = {0.2};
  d.trap_min = 2;
  d.trap_max = 5;
  d.pairing = PairRule::Traps;
  groups.push_back(d);

  GroupSpec e;
  e.group_id = 'E';
  e.count = 14;
  e.sizes = {5, 6, 7, 8, 9, 10, 11, 12, 13};
  e.density_min = 0.1;
  e.density_max = 0.3;
  e.trap_min = 0;
  e.trap_max = 2;
  e.unreachable_count = 14;
  groups.push_back(e);

  GroupSpec f;
  f.group_id = 'F';
  f.count = 10;
  f.sizes = {7, 8, 9, 10, 11};
  f.densities = {0.2};
  f.pairing = PairRule::Border;
  groups.push_back(f);

  GroupSpec g;
  g.group_id = 'G';
  g.count = 16;
  g.sizes = {9, 10, 11, 12, 13};
  g.density_min = 0.35;
  g.density_max = 0.45;
  g.trap_min = 2;
  g.trap_max = 6;
  g.border_walls = true;
  g.unreachable_count = 6;
  groups.push_back(g);

  GroupSpec h;
  h.group_id = 'H';
  h.count = 10;
  h.sizes = {9};
  h.densities = {0.25};
  h.trap_min = 2;
  h.trap_max = 2;
  h.shared_structures = 3;
  h.palettes = {kAllPalettes.begin(), kAllPalettes.end()};
  groups.push_back(h);

  GroupSpec x;
  x.group_id = 'X';
  x.count = 10;
  x.sizes = {20};
  x.density_min = 0.35;
  x.density_max = 0.55;
  x.trap_min = 8;
  x.trap_max = 25;
  x.unreachable_indices = {3, 6, 9};
  x.min_shortest = 28;
  x.max_shortest = 42;
  x.min_achieved_density = 0.35;
  groups.push_back(x);

  return groups;
}

std::string format_maze_id(int one_based_index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "gen_maze_%03d", one_based_index);
  return buf;
}

const ManifestEntry* Manifest::find(std::string_view maze_id) const {
  for (const auto& e : entries) {
    if (e.maze_id == maze_id) return &e;
  }
  return nullptr;
}

Manifest assemble_benchmark(const std::vector<GroupSpec>& config, std::uint64_t master_seed,
                            const AssemblyOptions& options) {
  std::set<char> seen;
  for (const auto& g : config) {
    g.validate();
    if (!seen.insert(g.group_id).second) {
      throw AssemblyFailed(std::string("duplicate group ") + g.group_id);
    }
  }

  Manifest manifest;
  manifest.master_seed = master_seed;
  int next = 1;
  for (const auto& g : config) {
    for (auto& member : build_group(g, master_seed, options)) {
      const std::string id = format_maze_id(next++);
      manifest.entries.push_back(ManifestEntry{
          .maze_id = id,
          .group_id = g.group_id,
          .spec = member.instance.spec,
          .image_path = "images/" + id + ".png",
          .grid = std::move(member.instance.grid),
          .annotation = std::move(member.instance.annotation),
          .pair_id = std::move(member.pair_id),
          .image_sha256 = std::nullopt,
      });
    }
  }
  return manifest;
}

nlohmann::json manifest_to_json(const Manifest& manifest) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : manifest.entries) {
    nlohmann::json j{{"maze_id", e.maze_id},
                     {"group_id", std::string(1, e.group_id)},
                     {"spec", e.spec},
                     {"image_path", e.image_path},
                     {"text_grid", export_text_grid(e.grid)},
                     {"annotation", e.annotation},
                     {"pair_id", nullptr},
                     {"image_sha256", nullptr}};
    if (e.pair_id) j["pair_id"] = *e.pair_id;
    if (e.image_sha256) j["image_sha256"] = *e.image_sha256;
    entries.push_back(std::move(j));
  }
  return nlohmann::json{{"version", manifest.version},
                        {"master_seed", manifest.master_seed},
                        {"entries", std::move(entries)}};
}

Manifest manifest_from_json(const nlohmann::json& j) {
  Manifest m;
  try {
    m.version = j.at("version").get<int>();
    if (m.version != kManifestVersion) {
      throw corrupt("manifest", "unsupported version " + std::to_string(m.version));
    }
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    std::set<std::string> ids;
    for (const auto& je : j.at("entries")) {
      const auto id = je.at("maze_id").get<std::string>();
      if (!ids.insert(id).second) throw corrupt(id, "duplicate maze_id");
      const auto group = je.at("group_id").get<std::string>();
      if (group.size() != 1 || !valid_group_id(group[0])) throw corrupt(id, "bad group_id '" + group + "'");

      auto spec = je.at("spec").get<MazeSpec>();
      spec.validate();
      MazeGrid grid = parse_text_grid(je.at("text_grid").get<std::string>());
      if (grid.rows() != spec.rows || grid.cols() != spec.cols) {
        throw corrupt(id, "text grid dimensions disagree with spec");
      }
      auto annotation = je.at("annotation").get<Annotation>();
      if (annotation != analyze(grid)) throw corrupt(id, "annotation does not match its grid");

      ManifestEntry entry{.maze_id = id,
                          .group_id = group[0],
                          .spec = spec,
                          .image_path = je.at("image_path").get<std::string>(),
                          .grid = std::move(grid),
                          .annotation = std::move(annotation),
                          .pair_id = std::nullopt,
                          .image_sha256 = std::nullopt};
      if (je.contains("pair_id") && !je["pair_id"].is_null()) entry.pair_id = je["pair_id"].get<std::string>();
      if (je.contains("image_sha256") && !je["image_sha256"].is_null()) {
        entry.image_sha256 = je["image_sha256"].get<std::string>();
      }
      m.entries.push_back(std::move(entry));
    }
  } catch (const ManifestCorrupt&) {
    throw;
  } catch (const nlohmann::json::exception& ex) {
    throw ManifestCorrupt(std::string("schema mismatch: ") + ex.what());
  } catch (const Error& ex) {
    throw ManifestCorrupt(std::string("invalid entry: ") + ex.what());
  }
  return m;
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << manifest_to_json(manifest).dump(2) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ManifestCorrupt(path.string() + ": " + ex.what());
  }
  return manifest_from_json(j);
}

void render_images(Manifest& manifest, const std::filesystem::path& root) {
  for (auto& e : manifest.entries) {
    const auto bytes = render_png(e.grid, e.spec.palette, e.spec.seed);
    const auto path = root / e.image_path;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing " + path.string());
    e.image_sha256 = sha256_hex(bytes);
  }
}

std::vector<std::string> verify_images(const Manifest& manifest, const std::filesystem::path& root) {
  std::vector<std::string> bad;
  for (const auto& e : manifest.entries) {
    std::ifstream in(root / e.image_path, std::ios::binary);
    if (!in || !e.image_sha256) {
      bad.push_back(e.maze_id);
      continue;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (sha256_hex(std::string_view(buf.str())) != *e.image_sha256) bad.push_back(e.maze_id);
  }
  return bad;
}

}  // namespace gridmaze
