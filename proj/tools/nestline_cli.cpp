#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nestline/errors.hpp"
#include "nestline/instance.hpp"
#include "nestline/multi_start.hpp"
#include "nestline/report.hpp"
#include "nestline/seeding.hpp"
#include "nestline/svg.hpp"
#include "nestline/verify.hpp"

namespace {

using namespace nestline;

enum Exit { kOk = 0, kVerifyFailed = 1, kInputError = 2, kSolverError = 3 };

struct RunFlags {
  std::string instance;
  int starts = 10;
  int bl_iters = 1000;
  std::optional<double> raster_scale;
  double max_time = 3600.0;
  int max_outer = 50;
  int max_inner = 5000;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out_json;
  std::string out_svg;
  std::string out_layout;
  bool no_timings = false;
  bool start_layouts = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_starts) {
  if (with_starts) {
    cmd->add_option("--starts", f.starts, "Number of bottom-left starting points")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--max-time", f.max_time, "Solver time limit per start, seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--max-outer", f.max_outer, "Augmented Lagrangian outer iterations per start")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--max-inner", f.max_inner, "Inner iterations per outer iteration")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--threads", f.threads,
                    "Parallel starts (default: NESTLINE_THREADS or 1)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--no-timings", f.no_timings, "Omit wall-clock fields from the JSON report");
    cmd->add_flag("--start-layouts", f.start_layouts, "Include every start's placements in the JSON report");
  }
  cmd->add_option("--bl-iters", f.bl_iters, "Bottom-left iterations per starting point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--raster-scale", f.raster_scale, "Raster cell edge length")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--out-json", f.out_json, "Write the JSON report here");
  cmd->add_option("--out-svg", f.out_svg, "Write an SVG of the best layout here");
  cmd->add_option("--out-layout", f.out_layout, "Write the best layout (JSON) here");
}

MultiStartOptions to_options(const RunFlags& f, const NestingInstance& inst) {
  MultiStartOptions o;
  o.starts = f.starts;
  o.bl_iterations = f.bl_iters;
  o.raster_scale = effective_raster_scale(inst, f.raster_scale);
  o.rng_seed = f.seed;
  o.threads = resolve_threads(f.threads);
  o.solver.max_time_seconds = f.max_time;
  o.solver.max_outer_iterations = f.max_outer;
  o.solver.max_inner_iterations = f.max_inner;
  return o;
}

void print_stats(const RunReport& r) {
  std::printf("%s: e=%g n=%zu N=%zu Q=%zu variables=%zu constraints=%zu\n", r.instance.c_str(),
              r.strip_width, r.piece_count, r.part_count, r.line_count, r.variable_count,
              r.constraint_count);
}

int write_best(const RunReport& report, const NestingInstance& inst,
               const std::vector<Piece>& pieces, const RunFlags& f) {
  const int b = report.summary.best_start;
  if (b < 0) return kOk;
  const auto& best = report.starts[static_cast<std::size_t>(b)];
  if (!f.out_layout.empty()) {
    write_layout(make_layout(inst.name, inst.strip_width, best.final_length, pieces, best.placements,
                             std::span<const SeparationLineVar>(best.lines)),
                 f.out_layout);
  }
  if (!f.out_svg.empty()) {
    SvgOptions so;
    so.title = inst.name;
    write_text_file(f.out_svg, render_svg(inst.strip_width, best.final_length, pieces,
                                          best.placements, so));
  }
  return kOk;
}

int cmd_solve(const RunFlags& f) {
  const NestingInstance inst = parse_instance(f.instance);
  const auto pieces = expand_pieces(inst);
  const RunReport report = multi_start(inst.name, inst.strip_width, pieces, to_options(f, inst));
  print_stats(report);
  std::cout << report_table(std::span<const RunReport>(&report, 1));
  ReportJsonOptions jo;
  jo.include_timings = !f.no_timings;
  jo.include_start_layouts = f.start_layouts;
  if (!f.out_json.empty()) write_text_file(f.out_json, report_json(report, jo));
  write_best(report, inst, pieces, f);
  require_feasible(report);
  return kOk;
}

int cmd_bench(const std::vector<std::string>& paths, const RunFlags& f) {
  std::vector<RunReport> reports;
  int rc = kOk;
  for (const auto& path : paths) {
    const NestingInstance inst = parse_instance(path);
    const auto pieces = expand_pieces(inst);
    reports.push_back(multi_start(inst.name, inst.strip_width, pieces, to_options(f, inst)));
    print_stats(reports.back());
    if (reports.back().summary.feasible_count == 0) rc = kSolverError;
  }
  std::cout << report_table(reports);
  if (!f.out_json.empty()) {
    ReportJsonOptions jo;
    jo.include_timings = !f.no_timings;
    jo.include_start_layouts = f.start_layouts;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(nlohmann::ordered_json::parse(report_json(r, jo)));
    write_text_file(f.out_json, arr.dump(2) + "\n");
  }
  return rc;
}

int cmd_seed(const RunFlags& f) {
  const NestingInstance inst = parse_instance(f.instance);
  const auto pieces = expand_pieces(inst);
  SeedOptions so;
  so.iterations = f.bl_iters;
  so.scale = effective_raster_scale(inst, f.raster_scale);
  so.rng_seed = f.seed;
  const SeedLayout seed = generate_start(inst.strip_width, pieces, so);
  const VerifyResult check = verify_layout(inst.strip_width, pieces, seed.length, seed.placements,
                                           std::span<const SeparationLineVar>(seed.lines));
  std::printf("%s: seed length %.6f (iteration %d of %d, scale %g, %.2f s)%s\n", inst.name.c_str(),
              seed.length, seed.best_iteration, f.bl_iters, so.scale, seed.total_seconds,
              check.ok ? "" : " [verification failed]");
  if (!f.out_json.empty()) {
    nlohmann::ordered_json doc;
    doc["instance"] = inst.name;
    doc["rng_seed"] = f.seed;
    doc["bl_iterations"] = f.bl_iters;
    doc["raster_scale"] = so.scale;
    doc["length"] = seed.length;
    doc["best_iteration"] = seed.best_iteration;
    doc["feasible"] = check.ok;
    if (!f.no_timings) {
      doc["raster_seconds"] = std::round(seed.raster_seconds * 100.0) / 100.0;
      doc["seed_seconds"] = std::round(seed.total_seconds * 100.0) / 100.0;
    }
    write_text_file(f.out_json, doc.dump(2) + "\n");
  }
  if (!f.out_layout.empty()) {
    write_layout(make_layout(inst.name, inst.strip_width, seed.length, pieces, seed.placements,
                             std::span<const SeparationLineVar>(seed.lines)),
                 f.out_layout);
  }
  if (!f.out_svg.empty()) {
    SvgOptions svg;
    svg.title = inst.name;
    write_text_file(f.out_svg, render_svg(inst.strip_width, seed.length, pieces, seed.placements, svg));
  }
  for (const auto& m : check.messages) std::fprintf(stderr, "  %s\n", m.c_str());
  return check.ok ? kOk : kVerifyFailed;
}

int cmd_verify(const std::string& instance_path, const std::string& layout_path) {
  const NestingInstance inst = parse_instance(instance_path);
  const auto pieces = expand_pieces(inst);
  const Layout layout = parse_layout(layout_path);
  const auto placements = placements_for(layout, pieces);
  std::optional<std::span<const SeparationLineVar>> lines;
  if (layout.lines) {
    if (layout.lines->size() != enumerate_pairs(pieces).size()) {
      throw Error(ErrorCode::ValidationError, "layout line count does not match the instance");
    }
    lines = std::span<const SeparationLineVar>(*layout.lines);
  }
  const VerifyResult v = verify_layout(inst.strip_width, pieces, layout.length, placements, lines);
  const auto& r = v.report;
  std::printf("containment-y %.3e\ncontainment-x %.3e\n", r.containment_y, r.containment_x);
  if (lines) std::printf("separation %.3e\n", r.separation);
  std::printf("max overlap area %.3e (limit %.3e)\n", r.max_overlap_area, v.overlap_limit);
  for (const auto& m : v.messages) std::printf("FAIL %s\n", m.c_str());
  std::printf("%s\n", v.ok ? "OK" : "INFEASIBLE");
  return v.ok ? kOk : kVerifyFailed;
}

int cmd_render(const std::string& instance_path, const std::string& layout_path,
               const std::string& out_svg) {
  const NestingInstance inst = parse_instance(instance_path);
  const auto pieces = expand_pieces(inst);
  const Layout layout = parse_layout(layout_path);
  const auto placements = placements_for(layout, pieces);
  SvgOptions so;
  so.title = inst.name;
  write_text_file(out_svg, render_svg(inst.strip_width, layout.length, pieces, placements, so));
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::IoError:
    case ErrorCode::SelfIntersecting:
    case ErrorCode::Degenerate:
    case ErrorCode::DoesNotFit:
    case ErrorCode::EmptyInstance:
      return kInputError;
    default:
      return kSolverError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strip nesting with separation lines and multi-start local optimization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nestline::version()));

  RunFlags solve_flags, seed_flags, bench_flags;
  auto* solve = app.add_subcommand("solve", "Seed and optimize one instance");
  solve->add_option("--instance", solve_flags.instance, "Instance JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  add_run_flags(solve, solve_flags, true);

  auto* seed = app.add_subcommand("seed", "Build one bottom-left starting layout");
  seed->add_option("--instance", seed_flags.instance, "Instance JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  add_run_flags(seed, seed_flags, false);
  seed->add_flag("--no-timings", seed_flags.no_timings, "Omit wall-clock fields from the JSON");

  std::string verify_instance, verify_layout_path;
  auto* verify = app.add_subcommand("verify", "Check a layout for containment and overlap");
  verify->add_option("--instance", verify_instance, "Instance JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  verify->add_option("--layout", verify_layout_path, "Layout JSON file")
      ->required()
      ->check(CLI::ExistingFile);

  std::string render_instance, render_layout, render_out;
  auto* render = app.add_subcommand("render", "Draw a layout as SVG");
  render->add_option("--instance", render_instance, "Instance JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  render->add_option("--layout", render_layout, "Layout JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  render->add_option("--out-svg", render_out, "Output SVG file")->required();

  std::vector<std::string> bench_paths;
  auto* bench = app.add_subcommand("bench", "Run several instances and print a results table");
  bench->add_option("--instance", bench_paths, "Instance JSON files")
      ->required()
      ->check(CLI::ExistingFile);
  add_run_flags(bench, bench_flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    if (*solve) return cmd_solve(solve_flags);
    if (*seed) return cmd_seed(seed_flags);
    if (*verify) return cmd_verify(verify_instance, verify_layout_path);
    if (*render) return cmd_render(render_instance, render_layout, render_out);
    if (*bench) return cmd_bench(bench_paths, bench_flags);
  } catch (const nestline::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", std::string(nestline::to_string(e.code())).c_str(),
                 e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kSolverError;
  }
  return kInputError;
}
