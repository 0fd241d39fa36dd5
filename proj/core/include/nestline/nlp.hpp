#pragma once

#include <cstddef>
#include <span>

namespace nestline {

/// Smooth inequality-constrained problem: minimize f(v) subject to g(v) <= 0 and
/// lower <= v <= upper. Implementations must be reentrant.
class ConstrainedProblem {
 public:
  virtual ~ConstrainedProblem() = default;

  virtual std::size_t dimension() const = 0;
  virtual std::size_t constraint_count() const = 0;
  virtual std::span<const double> lower_bounds() const = 0;
  virtual std::span<const double> upper_bounds() const = 0;

  virtual double objective(std::span<const double> v) const = 0;
  virtual void objective_gradient(std::span<const double> v, std::span<double> grad) const = 0;

  virtual void constraints(std::span<const double> v, std::span<double> g) const = 0;
  /// grad += sum_i weights[i] * grad g_i(v)
  virtual void add_weighted_constraint_gradients(std::span<const double> v,
                                                 std::span<const double> weights,
                                                 std::span<double> grad) const = 0;

  /// Whether constraint i is tightened by the solver's safety margin.
  virtual bool uses_margin(std::size_t i) const {
    (void)i;
    return true;
  }
};

}  // namespace nestline
