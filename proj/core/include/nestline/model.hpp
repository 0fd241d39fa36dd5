#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nestline/geometry.hpp"
#include "nestline/nlp.hpp"

namespace nestline {

/// Variables of one separation line: reference point and direction angle.
struct SeparationLineVar {
  double x_bar = 0.0;
  double y_bar = 0.0;
  double alpha = 0.0;
};

/// A cross-piece pair of convex parts (piece_i < piece_r) that needs a line.
struct PairIndex {
  int piece_i = 0;
  int part_j = 0;
  int piece_r = 0;
  int part_s = 0;

  friend auto operator<=>(const PairIndex&, const PairIndex&) = default;
};

/// One entry per unordered cross-piece part pair, sorted by (i, j, r, s).
std::vector<PairIndex> enumerate_pairs(std::span<const Piece> pieces);

/// Closed-form line count for per-piece part counts p_1..p_n:
/// sum_{i<n} p_i (N - sum_{k<=i} p_k).
std::int64_t pair_count_formula(std::span<const int> parts_per_piece);

struct PlacedVertex {
  double x = 0.0;
  double y = 0.0;
  double dx_dtheta = 0.0;  // d/dtx and d/dty are the unit vectors
  double dy_dtheta = 0.0;
};

PlacedVertex placed_vertex(Point local, const Placement& pl);

/// Which block of the separation constraints a vertex belongs to: vertices of
/// part (i, j) must satisfy r <= 0, vertices of part (r, s) must satisfy -r <= 0.
enum class LineSide { Left, Right };

/// Value and gradient over (tx, ty, theta, x_bar, y_bar, alpha).
struct SeparationResidual {
  double value = 0.0;
  std::array<double, 6> gradient{};
};

/// r = (y - y_bar) cos(alpha) - (x - x_bar) sin(alpha) for the placed vertex,
/// negated for LineSide::Right. The constraint is residual <= 0.
SeparationResidual separation_residual(Point local, const Placement& pl,
                                       const SeparationLineVar& line, LineSide side);

enum class ConstraintFamily { ContainmentY, ContainmentX, Separation };

struct SparseEntry {
  std::size_t index;
  double value;
};

struct FeasibilityReport {
  double max_violation = 0.0;
  double containment_y = 0.0;
  double containment_x = 0.0;
  double separation = 0.0;
  double bounds = 0.0;
  double max_overlap_area = 0.0;
  double min_part_area = 0.0;
  std::optional<std::pair<std::string, std::string>> worst_pair;  // piece ids
};

/// The nesting nonlinear program over the flat vector
/// (z, tx_1, ty_1, theta_1, ..., x_bar_1, y_bar_1, alpha_1, ...).
///
/// Constraint order: for every piece, part and part vertex the four containment
/// rows (-y, y - e, -x, x - z); then for every pair the Left block (vertices of
/// part (i, j)) followed by the Right block (vertices of part (r, s)).
class NlpProblem final : public ConstrainedProblem {
 public:
  NlpProblem(double strip_width, std::vector<Piece> pieces, std::vector<PairIndex> pairs,
             std::optional<double> z_upper = std::nullopt);

  std::size_t dimension() const override { return dimension_; }
  std::size_t constraint_count() const override { return constraint_count_; }
  std::span<const double> lower_bounds() const override { return lower_; }
  std::span<const double> upper_bounds() const override { return upper_; }

  double objective(std::span<const double> v) const override;
  void objective_gradient(std::span<const double> v, std::span<double> grad) const override;
  void constraints(std::span<const double> v, std::span<double> g) const override;
  void add_weighted_constraint_gradients(std::span<const double> v,
                                         std::span<const double> weights,
                                         std::span<double> grad) const override;

  /// Only separation rows take the margin: containment may be violated within
  /// feasibility_tol, while overlap must vanish.
  bool uses_margin(std::size_t c) const override { return c >= containment_count(); }

  /// Gradient of a single constraint, at most seven non-zeros.
  std::vector<SparseEntry> constraint_gradient(std::size_t c, std::span<const double> v) const;
  ConstraintFamily family(std::size_t c) const;
  /// Piece indices referenced by constraint c (one or two).
  std::vector<int> pieces_of(std::size_t c) const;

  double strip_width() const noexcept { return strip_width_; }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  const std::vector<PairIndex>& pairs() const noexcept { return pairs_; }
  std::size_t piece_count() const noexcept { return pieces_.size(); }
  std::size_t line_count() const noexcept { return pairs_.size(); }
  std::size_t containment_count() const noexcept { return 4 * vertex_total_; }
  std::size_t vertex_total() const noexcept { return vertex_total_; }
  double total_area() const noexcept { return total_area_; }

  static constexpr std::size_t z_index() { return 0; }
  static constexpr std::size_t piece_offset(std::size_t i) { return 1 + 3 * i; }
  std::size_t line_offset(std::size_t l) const { return 1 + 3 * pieces_.size() + 3 * l; }

  std::vector<double> encode(double z, std::span<const Placement> placements,
                             std::span<const SeparationLineVar> lines) const;
  std::vector<Placement> placements(std::span<const double> v) const;
  std::vector<SeparationLineVar> lines(std::span<const double> v) const;

 private:
  struct PartRef {
    int piece;
    std::size_t begin;  // into local_
    std::size_t size;
  };

  void check_dimension(std::span<const double> v) const;
  void place_all(std::span<const double> v, std::vector<Point>& placed) const;

  double strip_width_;
  std::vector<Piece> pieces_;
  std::vector<PairIndex> pairs_;
  std::vector<Point> local_;              // every part vertex, piece-major
  std::vector<int> vertex_piece_;         // owning piece per local vertex
  std::vector<PartRef> parts_;            // global part list
  std::vector<std::size_t> piece_first_part_;
  std::vector<std::size_t> pair_row_begin_;  // first separation row of each pair
  std::vector<double> lower_, upper_;
  std::size_t vertex_total_ = 0;
  std::size_t dimension_ = 0;
  std::size_t constraint_count_ = 0;
  double total_area_ = 0.0;
};

NlpProblem build_problem(double strip_width, std::vector<Piece> pieces,
                         std::optional<double> z_upper = std::nullopt);

/// Max constraint value per family plus the exact overlap cross-check.
/// Throws Error(DimensionMismatch) when v has the wrong size.
FeasibilityReport check_feasibility(std::span<const double> v, const NlpProblem& problem);

/// Exact-geometry check of placements alone (no line variables needed).
FeasibilityReport check_layout(const NlpProblem& problem, double z,
                               std::span<const Placement> placements);

}  // namespace nestline
