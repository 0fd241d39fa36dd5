#include "nestline/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

#include "nestline/errors.hpp"

namespace nestline {
namespace {

using Clock = std::chrono::steady_clock;
using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double inf_norm(const Vec& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

class Lbfgs {
 public:
  explicit Lbfgs(int memory) : memory_(static_cast<std::size_t>(std::max(1, memory))) {}

  bool empty() const { return s_.empty(); }
  void clear() {
    s_.clear();
    y_.clear();
    rho_.clear();
  }

  void push(Vec s, Vec y) {
    const double sy = dot(s, y);
    if (!(sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y)))) return;
    if (s_.size() == memory_) {
      s_.pop_front();
      y_.pop_front();
      rho_.pop_front();
    }
    s_.push_back(std::move(s));
    y_.push_back(std::move(y));
    rho_.push_back(1.0 / sy);
  }

  // Returns -H q using the two-loop recursion.
  Vec direction(const Vec& q_in) const {
    Vec q = q_in;
    std::vector<double> a(s_.size());
    for (std::size_t k = s_.size(); k-- > 0;) {
      a[k] = rho_[k] * dot(s_[k], q);
      for (std::size_t i = 0; i < q.size(); ++i) q[i] -= a[k] * y_[k][i];
    }
    double gamma = 1.0;
    if (!s_.empty()) gamma = dot(s_.back(), y_.back()) / dot(y_.back(), y_.back());
    for (double& x : q) x *= gamma;
    for (std::size_t k = 0; k < s_.size(); ++k) {
      const double b = rho_[k] * dot(y_[k], q);
      for (std::size_t i = 0; i < q.size(); ++i) q[i] += (a[k] - b) * s_[k][i];
    }
    for (double& x : q) x = -x;
    return q;
  }

 private:
  std::size_t memory_;
  std::deque<Vec> s_, y_;
  std::deque<double> rho_;
};

struct Evaluation {
  double phi = 0.0;        // augmented Lagrangian value
  double f = 0.0;
  double max_g = 0.0;      // of the original constraints
  bool admissible = false; // may become the incumbent
  Vec grad;
  Vec g;
};

class AugmentedLagrangian {
 public:
  // Rows with a margin must hold to incumbent_tol for an iterate to be
  // admissible; the others to feasibility_tol.
  AugmentedLagrangian(const ConstrainedProblem& p, double margin, double incumbent_tol,
                      double feasibility_tol)
      : p_(p), lo_(p.lower_bounds().begin(), p.lower_bounds().end()),
        hi_(p.upper_bounds().begin(), p.upper_bounds().end()), weights_(p.constraint_count()),
        margins_(p.constraint_count()) {
    limits_.resize(margins_.size());
    for (std::size_t i = 0; i < margins_.size(); ++i) {
      const bool tightened = p.uses_margin(i);
      margins_[i] = tightened ? margin : 0.0;
      limits_[i] = tightened ? incumbent_tol : feasibility_tol;
    }
  }

  void evaluate(const Vec& x, const Vec& lambda, double rho, Evaluation& out) {
    out.g.resize(p_.constraint_count());
    out.grad.assign(x.size(), 0.0);
    out.f = p_.objective(x);
    p_.constraints(x, out.g);
    if (!std::isfinite(out.f)) throw Error(ErrorCode::NonFiniteEvaluation, "objective is not finite");
    double phi = out.f;
    out.max_g = -std::numeric_limits<double>::infinity();
    out.admissible = true;
    for (std::size_t i = 0; i < out.g.size(); ++i) {
      const double gi = out.g[i];
      if (!std::isfinite(gi)) {
        throw Error(ErrorCode::NonFiniteEvaluation,
                    "constraint " + std::to_string(i) + " is not finite");
      }
      out.max_g = std::max(out.max_g, gi);
      if (gi > limits_[i]) out.admissible = false;
      const double t = gi + margins_[i] + lambda[i] / rho;
      if (t > 0.0) {
        phi += 0.5 * rho * t * t;
        weights_[i] = rho * t;
      } else {
        weights_[i] = 0.0;
      }
      phi -= 0.5 * lambda[i] * lambda[i] / rho;
    }
    out.phi = phi;
    p_.objective_gradient(x, out.grad);
    p_.add_weighted_constraint_gradients(x, weights_, out.grad);
    for (double v : out.grad) {
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteEvaluation, "gradient is not finite");
    }
  }

  double project(std::size_t i, double v) const { return std::clamp(v, lo_[i], hi_[i]); }

  void project(Vec& x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = project(i, x[i]);
  }

  double projected_gradient_norm(const Vec& x, const Vec& grad) const {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      m = std::max(m, std::abs(project(i, x[i] - grad[i]) - x[i]));
    }
    return m;
  }

  bool blocked(std::size_t i, double xi, double gi) const {
    return (xi <= lo_[i] && gi > 0.0) || (xi >= hi_[i] && gi < 0.0);
  }

  double margin(std::size_t i) const { return margins_[i]; }

 private:
  const ConstrainedProblem& p_;
  Vec lo_, hi_;
  Vec weights_;
  Vec margins_;
  Vec limits_;
};

struct Incumbent {
  bool found = false;
  double f = std::numeric_limits<double>::infinity();
  Vec x;

  void offer(const Vec& x_new, double f_new, bool admissible) {
    if (admissible && f_new < f) {
      found = true;
      f = f_new;
      x = x_new;
    }
  }
};

double bound_violation(const ConstrainedProblem& p, std::span<const double> v) {
  const auto lo = p.lower_bounds();
  const auto hi = p.upper_bounds();
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) m = std::max({m, lo[i] - v[i], v[i] - hi[i]});
  return m;
}

}  // namespace

void SolverOptions::validate() const {
  auto bad = [](const char* what) { throw Error(ErrorCode::ValidationError, what); };
  if (!(feasibility_tol > 0.0)) bad("feasibility_tol must be positive");
  if (!(stationarity_tol > 0.0)) bad("stationarity_tol must be positive");
  if (!(max_time_seconds > 0.0)) bad("max_time_seconds must be positive");
  if (max_outer_iterations < 1) bad("max_outer_iterations must be >= 1");
  if (!(penalty_init > 0.0)) bad("penalty_init must be positive");
  if (!(penalty_growth > 1.0)) bad("penalty_growth must exceed 1");
  if (inner_memory < 1) bad("inner_memory must be >= 1");
  if (max_inner_iterations < 1) bad("max_inner_iterations must be >= 1");
  if (!(incumbent_tol >= 0.0)) bad("incumbent_tol must be non-negative");
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Error: return "error";
  }
  return "unknown";
}

double max_violation(const ConstrainedProblem& problem, std::span<const double> v) {
  if (v.size() != problem.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "point has the wrong dimension");
  }
  Vec g(problem.constraint_count());
  problem.constraints(v, g);
  double m = bound_violation(problem, v);
  for (double gi : g) m = std::max(m, gi);
  return m;
}

SolveResult solve(const ConstrainedProblem& problem, std::span<const double> start,
                  const SolverOptions& opts, const SolverObserver& observer) {
  opts.validate();
  const auto t0 = Clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };
  const std::size_t n = problem.dimension();
  const std::size_t m = problem.constraint_count();
  if (start.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "start has " + std::to_string(start.size()) + " entries, expected " +
                    std::to_string(n));
  }

  const double margin = opts.constraint_margin < 0.0 ? opts.feasibility_tol : opts.constraint_margin;
  AugmentedLagrangian al(problem, margin, opts.incumbent_tol, opts.feasibility_tol);
  SolveResult result;

  Vec x(start.begin(), start.end());
  Incumbent best;
  {
    const double v0 = max_violation(problem, x);
    result.start_feasible = v0 <= opts.feasibility_tol;
    if (result.start_feasible) best.offer(x, problem.objective(x), true);
  }
  al.project(x);

  Vec lambda(m, 0.0);
  double rho = opts.penalty_init;
  double omega = std::max(opts.stationarity_tol, 1e-2);
  double prev_violation = std::numeric_limits<double>::infinity();
  bool timed_out = false;
  bool converged = false;
  double final_pg = std::numeric_limits<double>::infinity();
  double final_compl = std::numeric_limits<double>::infinity();
  Lbfgs memory(opts.inner_memory);
  Evaluation cur, trial;

  for (int outer = 0; outer < opts.max_outer_iterations && !timed_out; ++outer) {
    result.outer_iterations = outer + 1;
    memory.clear();
    al.evaluate(x, lambda, rho, cur);
    double pg = al.projected_gradient_norm(x, cur.grad);

    for (int inner = 0; inner < opts.max_inner_iterations && pg > omega; ++inner) {
      if (elapsed() >= opts.max_time_seconds) {
        timed_out = true;
        break;
      }
      Vec q = cur.grad;
      for (std::size_t i = 0; i < n; ++i) {
        if (al.blocked(i, x[i], q[i])) q[i] = 0.0;
      }
      Vec d = memory.direction(q);
      for (std::size_t i = 0; i < n; ++i) {
        if (q[i] == 0.0 && al.blocked(i, x[i], cur.grad[i])) d[i] = 0.0;
      }
      double slope = dot(d, cur.grad);
      if (!(slope < 0.0)) {
        memory.clear();
        d = q;
        for (double& v : d) v = -v;
        slope = dot(d, cur.grad);
      }
      if (!(slope < 0.0)) break;

      double step = memory.empty() ? std::min(1.0, 1.0 / std::max(inf_norm(d), 1e-300)) : 1.0;
      bool accepted = false;
      Vec xn(n);
      for (int ls = 0; ls < 60; ++ls) {
        for (std::size_t i = 0; i < n; ++i) xn[i] = al.project(i, x[i] + step * d[i]);
        Vec delta(n);
        for (std::size_t i = 0; i < n; ++i) delta[i] = xn[i] - x[i];
        const double predicted = dot(cur.grad, delta);
        if (predicted < 0.0) {
          al.evaluate(xn, lambda, rho, trial);
          if (trial.phi <= cur.phi + 1e-4 * predicted) {
            accepted = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!accepted) {
        if (memory.empty()) break;  // no progress even along the steepest descent
        memory.clear();
        continue;
      }

      Vec s(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = xn[i] - x[i];
        y[i] = trial.grad[i] - cur.grad[i];
      }
      memory.push(std::move(s), std::move(y));
      x.swap(xn);
      std::swap(cur, trial);
      pg = al.projected_gradient_norm(x, cur.grad);
      ++result.iterations;
      best.offer(x, cur.f, cur.admissible);
      if (observer) observer(result.iterations, cur.f, std::max(0.0, cur.max_g));
    }

    // Multiplier update; the AL gradient at x equals the Lagrangian gradient
    // under the updated multipliers.
    double shifted = 0.0;
    double compl_res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double gs = cur.g[i] + al.margin(i);
      shifted = std::max(shifted, gs);
      const double ln = std::clamp(std::max(0.0, lambda[i] + rho * gs), 0.0, 1e12);
      compl_res = std::max(compl_res, std::abs(std::min(-gs, ln)));
      lambda[i] = ln;
    }
    best.offer(x, cur.f, cur.admissible);
    final_pg = pg;
    final_compl = compl_res;

    if (shifted <= opts.feasibility_tol && compl_res <= opts.feasibility_tol &&
        pg <= opts.stationarity_tol) {
      converged = true;
      break;
    }
    if (shifted > opts.feasibility_tol && shifted > 0.25 * prev_violation) rho = std::min(rho * opts.penalty_growth, 1e12);
    prev_violation = shifted;
    omega = std::max(opts.stationarity_tol, 0.1 * omega);
    if (elapsed() >= opts.max_time_seconds) timed_out = true;
  }

  const double final_violation = std::max(0.0, max_violation(problem, x));
  const double final_f = problem.objective(x);
  result.multipliers = lambda;
  // A clearly better incumbent means the converged point is a worse local one.
  const double slack = opts.feasibility_tol * std::max(1.0, std::abs(final_f));
  if (converged && final_violation <= opts.feasibility_tol &&
      (!best.found || final_f <= best.f + slack)) {
    result.point = x;
    result.status = SolveStatus::Optimal;
    result.kkt_residual = final_pg;
    result.complementarity = final_compl;
  } else if (best.found) {
    result.point = best.x;
    result.status = SolveStatus::Feasible;
    result.kkt_residual = final_pg;
    result.complementarity = final_compl;
  } else {
    result.point = x;
    result.status = SolveStatus::Infeasible;
    result.kkt_residual = final_pg;
    result.complementarity = final_compl;
  }
  result.objective = problem.objective(result.point);
  result.max_violation = std::max(0.0, max_violation(problem, result.point));
  result.wall_time = elapsed();
  return result;
}

}  // namespace nestline
