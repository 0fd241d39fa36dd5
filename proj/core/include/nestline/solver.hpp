#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "nestline/nlp.hpp"

namespace nestline {

struct SolverOptions {
  double feasibility_tol = 1e-6;
  double stationarity_tol = 1e-6;
  double max_time_seconds = 3600.0;
  int max_outer_iterations = 50;
  double penalty_init = 10.0;
  double penalty_growth = 10.0;
  int inner_memory = 10;
  int max_inner_iterations = 5000;  // per outer iteration
  /// Rows selected by ConstrainedProblem::uses_margin are solved as
  /// g + margin <= 0 so that a point within feasibility_tol of the shifted
  /// problem satisfies g <= 0 exactly. Negative means "use feasibility_tol".
  double constraint_margin = -1.0;
  /// Largest violation of a margin row for an iterate to become the
  /// incumbent; other rows need only meet feasibility_tol.
  double incumbent_tol = 1e-10;

  /// Throws Error(ValidationError) when a field is out of range.
  void validate() const;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, Error };

std::string_view to_string(SolveStatus status);

struct SolveResult {
  std::vector<double> point;
  double objective = 0.0;
  SolveStatus status = SolveStatus::Error;
  double max_violation = 0.0;        // of the original constraints and bounds
  double kkt_residual = 0.0;         // projected Lagrangian gradient, inf-norm
  double complementarity = 0.0;
  std::vector<double> multipliers;   // one per constraint
  int iterations = 0;                // inner iterations over all outer loops
  int outer_iterations = 0;
  double wall_time = 0.0;
  bool start_feasible = false;
};

/// Called after every accepted inner step with (iteration, objective, violation).
using SolverObserver = std::function<void(int, double, double)>;

/// Augmented Lagrangian over the inequality constraints with a projected
/// limited-memory BFGS inner solver for the variable bounds.
/// Throws Error(DimensionMismatch) or Error(NonFiniteEvaluation).
SolveResult solve(const ConstrainedProblem& problem, std::span<const double> start,
                  const SolverOptions& opts = {}, const SolverObserver& observer = {});

/// Largest violation of g(v) <= 0 and of the bounds, or 0 when satisfied.
double max_violation(const ConstrainedProblem& problem, std::span<const double> v);

}  // namespace nestline
