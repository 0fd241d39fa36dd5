#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nestline/geometry.hpp"
#include "nestline/model.hpp"

namespace nestline {

/// Cell (row, col) offset inside a mask; row counts along the strip width.
struct Cell {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Raster cover of one piece at one of the four axis-aligned rotations.
///
/// The rotated piece is shifted so its bounding-box minimum sits at the mask
/// origin; a cell is set when its square meets the piece in positive area.
struct PieceMask {
  std::string piece_id;
  int quarter_turns = 0;  // rotation = quarter_turns * 90 degrees
  double scale = 1.0;
  int rows = 0;           // ceil(height / scale)
  int cols = 0;           // ceil(width / scale)
  double width = 0.0;     // exact rotated extents
  double height = 0.0;
  Point bbox_min;         // of the rotated piece around its reference point
  bool coarse = false;    // piece thinner than a cell in some direction
  std::vector<Cell> cells;                      // sorted by (row, col)
  std::vector<std::vector<std::uint64_t>> column_bits;  // per mask column, bit = row

  double angle() const;
};

/// Rotates a local point by quarter_turns * 90 degrees using exact coordinate swaps.
Point rotate_quarter(Point p, int quarter_turns);

/// Builds the conservative mask. Does not throw for coarse scales; sets `coarse`.
PieceMask rasterize(const Piece& piece, int quarter_turns, double scale);

struct GridPosition {
  int col = 0;
  int row = 0;

  friend auto operator<=>(const GridPosition&, const GridPosition&) = default;
};

/// Occupancy grid of the strip: width_cells rows, growing column list.
class RasterGrid {
 public:
  RasterGrid(double strip_width, double scale);

  double scale() const noexcept { return scale_; }
  double strip_width() const noexcept { return strip_width_; }
  int width_cells() const noexcept { return width_cells_; }
  int used_cols() const noexcept { return static_cast<int>(columns_.size()); }

  /// True when the mask's height fits the strip width at some row.
  bool fits_width(const PieceMask& mask) const;
  /// Largest row index at which the mask stays inside the strip, or -1.
  int max_row(const PieceMask& mask) const;
  bool collides(const PieceMask& mask, GridPosition pos) const;
  bool occupied(int row, int col) const;
  void occupy(const PieceMask& mask, GridPosition pos);
  /// Lexicographically smallest (col, row) collision-free position.
  /// Throws Error(DoesNotFit) when the mask is taller than the strip.
  GridPosition bottom_left(const PieceMask& mask) const;

 private:
  double strip_width_;
  double scale_;
  int width_cells_;
  std::size_t words_;
  std::vector<std::vector<std::uint64_t>> columns_;
};

/// Places masks in order, each at its bottom-left position, occupying the grid.
std::vector<GridPosition> bottom_left_place(std::span<const PieceMask* const> masks,
                                            RasterGrid& grid);

/// Placement of the piece whose mask sits at `pos`.
Placement placement_for(const PieceMask& mask, GridPosition pos);

/// Masks of every piece at the four rotations; entries are empty where the
/// rotated piece is taller than the strip.
struct MaskSet {
  double scale = 1.0;
  std::vector<std::array<std::optional<PieceMask>, 4>> masks;
  double build_seconds = 0.0;
};

/// Throws Error(DoesNotFit) naming the piece when no rotation fits.
MaskSet build_masks(std::span<const Piece> pieces, double strip_width, double scale);

struct SeedOptions {
  int iterations = 1000;
  double scale = 1.0;
  std::uint64_t rng_seed = 0;
};

struct SeedLayout {
  std::vector<Placement> placements;
  std::vector<int> quarter_turns;
  std::vector<int> order;           // placement order of the winning iteration
  double length = 0.0;
  std::vector<SeparationLineVar> lines;
  int best_iteration = 0;
  double raster_seconds = 0.0;      // mask construction
  double total_seconds = 0.0;       // masks + all iterations + line setup
};

/// Best of `iterations` bottom-left constructions with random orders and
/// rotations. Deterministic in rng_seed. Pass `masks` to reuse precomputed ones.
SeedLayout generate_start(double strip_width, std::span<const Piece> pieces,
                          const SeedOptions& opts, const MaskSet* masks = nullptr);

/// One separation line per cross-piece part pair, oriented so part (i, j) lies
/// on the non-positive side as the model requires. Throws Error(NoSeparator).
std::vector<SeparationLineVar> init_lines(std::span<const Placement> placements,
                                          std::span<const Piece> pieces,
                                          std::span<const PairIndex> pairs);

/// Exact max x over all placed vertices.
double layout_length(std::span<const Placement> placements, std::span<const Piece> pieces);

/// Default raster scale by instance name: albano 0.02, dagli 0.5, swim 0.00005,
/// otherwise 1.0.
double default_raster_scale(std::string_view instance_name);

/// 64-bit stream seed for iteration or start `index` under `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace nestline
