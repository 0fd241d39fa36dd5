#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "nestline/model.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace gradcheck {

using nestline::ConstraintFamily;
using nestline::NlpProblem;

struct Stats {
  double objective = 0.0;        // worst relative error per family
  double containment_y = 0.0;
  double containment_x = 0.0;
  double separation = 0.0;
  double weighted_sum = 0.0;     // full-vector path
  std::size_t comparisons = 0;

  double worst() const {
    return std::max({objective, containment_y, containment_x, separation, weighted_sum});
  }
};

/// Compares analytic derivatives with central differences (step h) at
/// `points` random decision vectors.
inline Stats run(const NlpProblem& p, std::uint64_t seed, int points, int rows_per_family = 3,
                 int coords_per_point = 24, double h = 1e-6) {
  std::mt19937_64 rng(seed);
  Stats st;
  const std::size_t n = p.dimension(), m = p.constraint_count();
  std::vector<double> g(m), grad(n), w(m);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::size_t> rows[3];
  for (std::size_t c = 0; c < m; ++c) rows[static_cast<int>(p.family(c))].push_back(c);

  for (int k = 0; k < points; ++k) {
    auto v = fixture::random_point(p, rng);
    std::vector<std::size_t> coords;
    if (n <= static_cast<std::size_t>(coords_per_point)) {
      for (std::size_t j = 0; j < n; ++j) coords.push_back(j);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      coords.push_back(0);
      while (coords.size() < static_cast<std::size_t>(coords_per_point)) coords.push_back(pick(rng));
    }

    // Objective.
    p.objective_gradient(v, grad);
    {
      const auto fd = oracle::fd_gradient([&](std::span<const double> x) { return p.objective(x); }, v, h);
      for (std::size_t j : coords) {
        st.objective = std::max(st.objective, oracle::rel_error(grad[j], fd[j]));
        ++st.comparisons;
      }
    }

    // Weighted sum of all constraints through the batched gradient. Rows are
    // differenced before summing so cancellation does not swamp the check.
    for (double& x : w) x = unit(rng);
    std::fill(grad.begin(), grad.end(), 0.0);
    p.add_weighted_constraint_gradients(v, w, grad);
    std::vector<double> gp(m), gm(m);
    for (std::size_t j : coords) {
      const double vj = v[j];
      v[j] = vj + h;
      p.constraints(v, gp);
      v[j] = vj - h;
      p.constraints(v, gm);
      v[j] = vj;
      double fd = 0.0;
      for (std::size_t i = 0; i < m; ++i) fd += w[i] * ((gp[i] - gm[i]) / (2 * h));
      st.weighted_sum = std::max(st.weighted_sum, oracle::rel_error(grad[j], fd));
      ++st.comparisons;
    }

    // Individual rows through the sparse single-row gradient.
    for (int fam = 0; fam < 3; ++fam) {
      if (rows[fam].empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, rows[fam].size() - 1);
      for (int r = 0; r < rows_per_family; ++r) {
        const std::size_t c = rows[fam][pick(rng)];
        const auto sparse = p.constraint_gradient(c, v);
        std::vector<double> dense(n, 0.0);
        for (const auto& e : sparse) dense[e.index] += e.value;
        std::vector<std::size_t> check_coords;
        for (const auto& e : sparse) check_coords.push_back(e.index);
        check_coords.push_back(coords.back());  // usually off-support: derivative 0
        double worst = 0.0;
        for (std::size_t j : check_coords) {
          const double vj = v[j];
          v[j] = vj + h;
          p.constraints(v, g);
          const double fp = g[c];
          v[j] = vj - h;
          p.constraints(v, g);
          const double fm = g[c];
          v[j] = vj;
          worst = std::max(worst, oracle::rel_error(dense[j], (fp - fm) / (2 * h)));
          ++st.comparisons;
        }
        double& slot = fam == 0 ? st.containment_y : fam == 1 ? st.containment_x : st.separation;
        slot = std::max(slot, worst);
      }
    }
  }
  return st;
}

}  // namespace gradcheck
