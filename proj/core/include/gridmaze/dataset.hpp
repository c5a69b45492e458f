#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridmaze/generator.hpp"
#include "gridmaze/grid.hpp"
#include "gridmaze/pathfinder.hpp"

namespace gridmaze {

enum class PairRule : std::uint8_t { None, Traps, Border };

// Parameters for one benchmark group. Per-entry values are assigned as
// follows: `sizes` and `densities` (when non-empty) are split into equal
// consecutive blocks over the group's units; otherwise density is drawn
// uniformly from [density_min, density_max] (to 0.01) and the trap count
// uniformly from [trap_min, trap_max]. A "unit" is one entry, one matched
// pair, or one shared structure.
struct GroupSpec {
  char group_id = 'A';
  int count = 0;
  std::vector<int> sizes;
  std::vector<double> densities;
  double density_min = 0.0;
  double density_max = 0.0;
  int trap_min = 0;
  int trap_max = 0;
  bool border_walls = false;
  // Entries (0-based, within the group) generated as unreachable. When
  // empty, `unreachable_count` entries are spread evenly.
  int unreachable_count = 0;
  std::vector<int> unreachable_indices;
  // Control/treatment pairs sharing a seed. Traps: control has no traps.
  // Border: control has the ring left open.
  PairRule pairing = PairRule::None;
  // >0: that many base structures, each rendered in `palettes` round-robin.
  int shared_structures = 0;
  std::vector<Palette> palettes;
  // Endpoints share a row or column joined by a clear corridor.
  bool straight_line = false;
  // Accepted shortest-path range for reachable entries.
  int min_shortest = 4;
  int max_shortest = 42;
  // Lower bound on achieved density (achieved walls / candidates).
  double min_achieved_density = 0.0;

  void validate() const;
};

// The nine-group, 110-maze default configuration.
std::vector<GroupSpec> default_benchmark_config();

struct ManifestEntry {
  std::string maze_id;
  char group_id = 'A';
  MazeSpec spec;
  std::string image_path;
  MazeGrid grid;
  Annotation annotation;
  std::optional<std::string> pair_id;
  // Content hash of the rendered PNG, filled in once the image is written.
  std::optional<std::string> image_sha256;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

inline constexpr int kManifestVersion = 1;

struct Manifest {
  int version = kManifestVersion;
  std::uint64_t master_seed = 0;
  std::vector<ManifestEntry> entries;

  const ManifestEntry* find(std::string_view maze_id) const;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct AssemblyOptions {
  int max_attempts_per_unit = 10'000;
};

// Deterministic in (config, master_seed). Entries are numbered gen_maze_001
// onwards in config order. Throws AssemblyFailed.
Manifest assemble_benchmark(const std::vector<GroupSpec>& config, std::uint64_t master_seed,
                            const AssemblyOptions& options = {});

std::string format_maze_id(int one_based_index);

// Throws ManifestCorrupt when the document does not match the schema or any
// annotation disagrees with analyze() on its text grid.
Manifest manifest_from_json(const nlohmann::json& j);
nlohmann::json manifest_to_json(const Manifest& manifest);

void write_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest load_manifest(const std::filesystem::path& path);

// Renders every entry to <root>/<image_path> and records its SHA-256.
void render_images(Manifest& manifest, const std::filesystem::path& root);

// Re-hashes images on disk; returns ids whose hash is missing or differs.
std::vector<std::string> verify_images(const Manifest& manifest, const std::filesystem::path& root);

}  // namespace gridmaze
