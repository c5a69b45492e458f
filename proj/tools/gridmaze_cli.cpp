#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gridmaze/dataset.hpp"
#include "gridmaze/errors.hpp"
#include "gridmaze/generator.hpp"
#include "gridmaze/grader.hpp"
#include "gridmaze/harness/eval.hpp"
#include "gridmaze/renderer.hpp"
#include "gridmaze/reporter.hpp"
#include "gridmaze/serialization.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gridmaze;

namespace {

constexpr std::uint64_t kDefaultMasterSeed = 2026;

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  const fs::path p(out_path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + out_path);
  out << text;
}

std::string read_text(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const ManifestEntry& require_entry(const Manifest& m, const std::string& id) {
  const ManifestEntry* e = m.find(id);
  if (e == nullptr) throw ConfigError("no maze '" + id + "' in manifest");
  return *e;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GridMaze: generate, render, evaluate and report on grid mazes"};
  app.require_subcommand(1);

  // generate
  MazeSpec spec;
  std::string palette_name = "forest";
  std::string gen_format = "text";
  std::string gen_png;
  bool unreachable = false;
  auto* gen = app.add_subcommand("generate", "Generate one maze and print it with its annotation");
  gen->add_option("--rows", spec.rows, "Rows (5-20)")->capture_default_str();
  gen->add_option("--cols", spec.cols, "Columns (5-20)")->capture_default_str();
  gen->add_option("--density", spec.wall_density, "Wall density in [0, 0.55]")->capture_default_str();
  gen->add_option("--traps", spec.trap_count, "Number of traps")->capture_default_str();
  gen->add_flag("--border", spec.border_walls, "Surround the maze with a wall ring");
  gen->add_flag("--inset-frame", spec.inset_frame, "Keep endpoints off the outer ring even without walls there");
  gen->add_flag("--unreachable", unreachable, "Make the goal unreachable");
  gen->add_option("--palette", palette_name, "forest|desert|dungeon|meadow")->capture_default_str();
  gen->add_option("--seed", spec.seed, "Seed")->capture_default_str();
  gen->add_option("--format", gen_format, "text|json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  gen->add_option("--png", gen_png, "Also write the rendered image here");

  // build
  std::uint64_t master_seed = kDefaultMasterSeed;
  std::string build_out = "benchmark";
  bool build_no_images = false;
  auto* build = app.add_subcommand("build", "Assemble the default benchmark, render images, write manifest.json");
  build->add_option("--seed", master_seed, "Master seed")->capture_default_str();
  build->add_option("--out", build_out, "Output directory")->capture_default_str();
  build->add_flag("--no-images", build_no_images, "Write the manifest only");

  // render
  std::string manifest_path;
  std::string render_root;
  std::string render_maze;
  std::string render_png_out;
  auto* render = app.add_subcommand("render", "Render manifest images (all, or one maze to --png)");
  render->add_option("--manifest", manifest_path, "manifest.json")->required()->check(CLI::ExistingFile);
  render->add_option("--root", render_root, "Image root (default: manifest directory)");
  render->add_option("--maze", render_maze, "Render only this maze id");
  render->add_option("--png", render_png_out, "Output path for --maze");

  // validate
  std::string validate_root;
  auto* validate = app.add_subcommand("validate", "Re-check annotations and image hashes of a manifest");
  validate->add_option("--manifest", manifest_path, "manifest.json")->required()->check(CLI::ExistingFile);
  validate->add_option("--root", validate_root, "Image root (default: manifest directory)");

  // grade
  std::string grade_maze;
  std::string grade_response = "-";
  std::string grading_mode = "annotation-match";
  auto* grade_cmd = app.add_subcommand("grade", "Grade one raw solver answer against a manifest entry");
  grade_cmd->add_option("--manifest", manifest_path, "manifest.json")->required()->check(CLI::ExistingFile);
  grade_cmd->add_option("--maze", grade_maze, "Maze id")->required();
  grade_cmd->add_option("--response", grade_response, "File with the raw answer text, - for stdin")->capture_default_str();
  grade_cmd->add_option("--grading-mode", grading_mode, "annotation-match|simulate")->capture_default_str();

  // eval
  std::string providers_path;
  std::string input_mode = "image";
  std::string prompt_variant = "standard";
  std::string groups;
  std::string eval_out = "run.json";
  std::string image_root;
  int concurrency = 4;
  auto* eval = app.add_subcommand("eval", "Run providers over a manifest and write a run report");
  eval->add_option("--manifest", manifest_path, "manifest.json")->required()->check(CLI::ExistingFile);
  eval->add_option("--providers", providers_path, "Providers JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--input-mode", input_mode, "image|text-grid")->capture_default_str();
  eval->add_option("--prompt-variant", prompt_variant, "standard|visual-intuition")->capture_default_str();
  eval->add_option("--grading-mode", grading_mode, "annotation-match|simulate")->capture_default_str();
  eval->add_option("--concurrency", concurrency, "Parallel trials")->capture_default_str();
  eval->add_option("--groups", groups, "Group letters to run, e.g. ABX (default: all)");
  eval->add_option("--image-root", image_root, "Image root (default: manifest directory)");
  eval->add_option("--out", eval_out, "Run report path")->capture_default_str();

  // report
  std::vector<std::string> run_paths;
  std::string kind = "leaderboard";
  std::string format = "markdown";
  std::string scope;
  std::string report_out;
  auto* report_cmd = app.add_subcommand("report", "Compute metrics and print a table");
  report_cmd->add_option("--run", run_paths, "Run report (repeatable)")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--manifest", manifest_path, "manifest.json")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--kind", kind, "leaderboard|per_group|efficiency|ultra_hard|ablation")->capture_default_str();
  report_cmd->add_option("--format", format, "markdown|csv|json")->capture_default_str();
  report_cmd->add_option("--scope", scope, "core|ultra-hard|all (default: core)");
  report_cmd->add_option("--out", report_out, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      spec.palette = palette_from_string(palette_name);
      spec.reachable_target = !unreachable;
      const MazeInstance inst = generate(spec);
      if (gen_format == "json") {
        std::cout << json{{"spec", inst.spec},
                          {"text_grid", export_text_grid(inst.grid)},
                          {"annotation", inst.annotation},
                          {"achieved_wall_count", inst.achieved_wall_count},
                          {"candidate_count", inst.candidate_count},
                          {"seal_wall_count", inst.seal_wall_count}}
                         .dump(2)
                  << '\n';
      } else {
        const auto& a = inst.annotation;
        std::cout << export_text_grid(inst.grid) << "\n\nreachable: " << (a.reachable ? "yes" : "no") << '\n';
        if (a.shortest_len) {
          std::cout << "shortest: " << *a.shortest_len << "\naccepted paths: " << a.accepted_paths.size()
                    << (a.optimal_count_truncated ? " (capped)" : "") << "\nfirst: " << to_string(a.accepted_paths.front())
                    << '\n';
        }
      }
      if (!gen_png.empty()) write_bytes(gen_png, render_png(inst.grid, spec.palette, spec.seed));
      return 0;
    }

    if (build->parsed()) {
      const fs::path root(build_out);
      Manifest m = assemble_benchmark(default_benchmark_config(), master_seed);
      if (!build_no_images) render_images(m, root);
      write_manifest(m, root / "manifest.json");
      std::cerr << "wrote " << m.entries.size() << " mazes to " << (root / "manifest.json").string() << '\n';
      return 0;
    }

    if (render->parsed()) {
      Manifest m = load_manifest(manifest_path);
      if (!render_maze.empty()) {
        const auto& e = require_entry(m, render_maze);
        write_bytes(render_png_out.empty() ? render_maze + ".png" : render_png_out,
                    render_png(e.grid, e.spec.palette, e.spec.seed));
        return 0;
      }
      const fs::path root = render_root.empty() ? fs::path(manifest_path).parent_path() : fs::path(render_root);
      render_images(m, root);
      write_manifest(m, manifest_path);
      return 0;
    }

    if (validate->parsed()) {
      const Manifest m = load_manifest(manifest_path);
      const fs::path root = validate_root.empty() ? fs::path(manifest_path).parent_path() : fs::path(validate_root);
      const auto problems = verify_images(m, root);
      for (const auto& p : problems) std::cerr << p << '\n';
      std::cout << m.entries.size() << " entries, annotations verified, " << problems.size() << " image problems\n";
      return problems.empty() ? 0 : 1;
    }

    if (grade_cmd->parsed()) {
      const Manifest m = load_manifest(manifest_path);
      const auto& e = require_entry(m, grade_maze);
      const auto mode = grading_mode_from_string(grading_mode);
      const std::string raw = read_text(grade_response);
      Verdict v;
      json out;
      try {
        const auto resp = parse_response(raw);
        v = grade(resp, e.annotation, e.grid, mode);
        out["response"] = resp;
      } catch (const ParseFailure& ex) {
        v = grade_unusable(salvage_reachability(raw), e.annotation, mode);
        out["parse_failure"] = ex.what();
      }
      out["verdict"] = v;
      std::cout << out.dump(2) << '\n';
      return v.solved ? 0 : 2;
    }

    if (eval->parsed()) {
      const Manifest m = load_manifest(manifest_path);
      const auto providers = harness::load_providers(providers_path);
      harness::RunOptions opts;
      opts.input_mode = harness::input_mode_from_string(input_mode);
      opts.prompt_variant = harness::prompt_variant_from_string(prompt_variant);
      opts.grading_mode = grading_mode_from_string(grading_mode);
      opts.groups = groups;
      opts.concurrency = concurrency;
      opts.image_root = image_root.empty() ? fs::path(manifest_path).parent_path() : fs::path(image_root);
      const auto report = harness::run_eval(m, providers, opts);
      harness::write_report(report, eval_out);
      const auto rows = report::compute_metrics(report, m, report::Scope::All);
      for (const auto& r : rows) std::cerr << r.label << ": " << r.solved << "/" << r.total << " solved\n";
      return 0;
    }

    if (report_cmd->parsed()) {
      const Manifest m = load_manifest(manifest_path);
      std::vector<harness::RunReport> runs;
      for (const auto& p : run_paths) runs.push_back(harness::load_report(p));
      const auto table = report::table_kind_from_string(kind);
      const auto fmt = report::format_from_string(format);
      std::string text;
      if (table == report::TableKind::UltraHard) {
        text = report::emit_ultra_hard(report::ultra_hard_rows(runs, m), fmt);
      } else {
        const auto sc = scope.empty() ? report::Scope::Core : report::scope_from_string(scope);
        const auto rows = report::compute_metrics(runs, m, sc);
        if (rows.empty()) throw ConfigError("no trials in scope");
        text = report::emit_table(rows, table, fmt);
      }
      write_text(report_out, text);
      return 0;
    }
  } catch (const gridmaze::Error& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
