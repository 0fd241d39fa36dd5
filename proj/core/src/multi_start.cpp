#include "nestline/multi_start.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

#include "nestline/verify.hpp"

#ifndef NESTLINE_VERSION
#define NESTLINE_VERSION "0.0.0"
#endif

namespace nestline {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

StartRecord run_start(int index, double strip_width, std::span<const Piece> pieces,
                      const MaskSet& masks, const MultiStartOptions& opts) {
  StartRecord rec;
  rec.index = index;
  rec.seed = derive_seed(opts.rng_seed, static_cast<std::uint64_t>(index));
  try {
    const auto t_seed = Clock::now();
    SeedOptions so;
    so.iterations = opts.bl_iterations;
    so.scale = masks.scale;
    so.rng_seed = rec.seed;
    const SeedLayout seed = generate_start(strip_width, pieces, so, &masks);
    rec.seed_seconds = seconds_since(t_seed);
    rec.seed_length = seed.length;
    rec.seed_placements = seed.placements;

    const auto t_solve = Clock::now();
    std::vector<Piece> copy(pieces.begin(), pieces.end());
    const NlpProblem problem = build_problem(strip_width, std::move(copy), seed.length);
    const auto start = problem.encode(seed.length, seed.placements, seed.lines);
    const SolveResult res = solve(problem, start, opts.solver);
    rec.solve_seconds = seconds_since(t_solve);
    rec.status = res.status;
    rec.iterations = res.iterations;
    rec.max_violation = res.max_violation;
    rec.objective = res.objective;
    rec.placements = problem.placements(res.point);
    rec.lines = problem.lines(res.point);
    rec.final_length = layout_length(rec.placements, pieces);

    const VerifyResult check =
        verify_layout(strip_width, pieces, res.objective, rec.placements, std::nullopt);
    rec.max_overlap_area = check.report.max_overlap_area;
    rec.verified = check.ok;
    if (!check.ok) rec.message = check.messages.front();
  } catch (const std::exception& e) {
    rec.status = SolveStatus::Error;
    rec.message = e.what();
  }
  return rec;
}

}  // namespace

std::string_view version() { return NESTLINE_VERSION; }

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NESTLINE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

RunSummary summarize(std::span<const StartRecord> starts, double raster_seconds) {
  RunSummary s;
  s.raster_seconds = raster_seconds;
  double sum = 0.0, seed_sum = 0.0, solve_sum = 0.0;
  s.min_length = std::numeric_limits<double>::infinity();
  s.max_length = -std::numeric_limits<double>::infinity();
  for (const auto& r : starts) {
    seed_sum += r.seed_seconds;
    solve_sum += r.solve_seconds;
    if (!r.feasible()) continue;
    ++s.feasible_count;
    sum += r.final_length;
    if (r.final_length < s.min_length) {
      s.min_length = r.final_length;
      s.best_start = r.index;
    }
    s.max_length = std::max(s.max_length, r.final_length);
  }
  if (s.feasible_count > 0) {
    s.avg_length = sum / s.feasible_count;
  } else {
    s.min_length = s.max_length = s.avg_length = 0.0;
  }
  if (!starts.empty()) {
    const double k = static_cast<double>(starts.size());
    s.avg_seed_seconds = seed_sum / k + raster_seconds;
    s.avg_seed_seconds_amortized = (seed_sum + raster_seconds) / k;
    s.avg_solve_seconds = solve_sum / k;
  }
  return s;
}

RunReport multi_start(std::string_view instance_name, double strip_width,
                      std::span<const Piece> pieces, const MultiStartOptions& opts) {
  if (opts.starts < 1) throw Error(ErrorCode::ValidationError, "starts must be >= 1");
  if (opts.bl_iterations < 1) throw Error(ErrorCode::ValidationError, "bl iterations must be >= 1");
  if (pieces.empty()) throw Error(ErrorCode::EmptyInstance, "no pieces to place");
  opts.solver.validate();

  RunReport report;
  report.instance = std::string(instance_name);
  report.strip_width = strip_width;
  report.options = opts;
  report.version = std::string(version());
  report.piece_count = pieces.size();
  for (const auto& p : pieces) {
    report.part_count += p.parts.size();
    report.piece_ids.push_back(p.id);
  }
  {
    std::vector<Piece> copy(pieces.begin(), pieces.end());
    const NlpProblem problem = build_problem(strip_width, std::move(copy));
    report.line_count = problem.line_count();
    report.variable_count = problem.dimension();
    report.constraint_count = problem.constraint_count();
  }

  const MaskSet masks = build_masks(pieces, strip_width, opts.raster_scale);
  report.starts.resize(static_cast<std::size_t>(opts.starts));
  const int workers = std::min(resolve_threads(opts.threads), opts.starts);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < opts.starts; i = next++) {
      report.starts[static_cast<std::size_t>(i)] = run_start(i, strip_width, pieces, masks, opts);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  report.summary = summarize(report.starts, masks.build_seconds);
  return report;
}

void require_feasible(const RunReport& report) {
  if (report.summary.feasible_count > 0) return;
  std::string msg = "no feasible start for '" + report.instance + "'";
  for (const auto& r : report.starts) {
    msg += "\n  start " + std::to_string(r.index) + ": " + std::string(to_string(r.status));
    if (!r.message.empty()) msg += " (" + r.message + ")";
  }
  throw Error(ErrorCode::AllStartsFailed, msg);
}

}  // namespace nestline
