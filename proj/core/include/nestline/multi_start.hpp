#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nestline/errors.hpp"
#include "nestline/geometry.hpp"
#include "nestline/model.hpp"
#include "nestline/seeding.hpp"
#include "nestline/solver.hpp"

namespace nestline {

std::string_view version();

struct MultiStartOptions {
  int starts = 10;
  int bl_iterations = 1000;
  double raster_scale = 1.0;
  std::uint64_t rng_seed = 0;
  int threads = 1;
  SolverOptions solver;
};

struct StartRecord {
  int index = 0;
  std::uint64_t seed = 0;            // stream seed handed to the bottom-left generator
  double seed_length = 0.0;
  double final_length = 0.0;         // exact max x of the returned layout
  double objective = 0.0;            // z at the returned point
  SolveStatus status = SolveStatus::Error;
  bool verified = false;             // passed the exact-geometry check
  double max_violation = 0.0;
  double max_overlap_area = 0.0;
  double seed_seconds = 0.0;         // bottom-left iterations and line setup
  double solve_seconds = 0.0;
  int iterations = 0;
  std::string message;               // error or verification note
  std::vector<Placement> seed_placements;
  std::vector<Placement> placements;
  std::vector<SeparationLineVar> lines;

  bool feasible() const {
    return verified && (status == SolveStatus::Optimal || status == SolveStatus::Feasible);
  }
};

struct RunSummary {
  int feasible_count = 0;
  double min_length = 0.0;
  double avg_length = 0.0;
  double max_length = 0.0;
  double raster_seconds = 0.0;             // one mask build, shared by all starts
  double avg_seed_seconds = 0.0;           // per start, mask build counted in full
  double avg_seed_seconds_amortized = 0.0; // per start, mask build split over starts
  double avg_solve_seconds = 0.0;
  int best_start = -1;                     // lowest index among minimal lengths
};

struct RunReport {
  std::string instance;
  double strip_width = 0.0;
  std::size_t piece_count = 0;
  std::size_t part_count = 0;
  std::size_t line_count = 0;
  std::size_t variable_count = 0;
  std::size_t constraint_count = 0;
  std::vector<std::string> piece_ids;  // order of the placement lists
  MultiStartOptions options;
  std::string version;
  std::vector<StartRecord> starts;
  RunSummary summary;
};

/// Recomputes the summary fields from the per-start records.
RunSummary summarize(std::span<const StartRecord> starts, double raster_seconds);

/// Runs `opts.starts` bottom-left seeds on distinct RNG streams and solves each.
/// Starts may run on several threads; records are stored by start index.
/// Returns the report even when no start is feasible; see require_feasible.
RunReport multi_start(std::string_view instance_name, double strip_width,
                      std::span<const Piece> pieces, const MultiStartOptions& opts);

/// Throws Error(AllStartsFailed) with per-start diagnostics when the report has
/// no feasible start.
void require_feasible(const RunReport& report);

/// Worker count: `requested` when positive, else NESTLINE_THREADS, else 1.
int resolve_threads(int requested);

}  // namespace nestline
