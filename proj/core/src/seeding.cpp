#include "nestline/seeding.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "nestline/errors.hpp"

namespace nestline {
namespace {

constexpr double kHalfPi = 1.57079632679489661923;
constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform integer in [0, n) by rejection; the standard distributions are not
// portable across library implementations.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

std::size_t word_count(int bits) { return static_cast<std::size_t>((bits + 63) / 64); }

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL + 1));
}

Point rotate_quarter(Point p, int quarter_turns) {
  switch (((quarter_turns % 4) + 4) % 4) {
    case 0: return p;
    case 1: return {-p.y, p.x};
    case 2: return {-p.x, -p.y};
    default: return {p.y, -p.x};
  }
}

double PieceMask::angle() const { return quarter_turns * kHalfPi; }

PieceMask rasterize(const Piece& piece, int quarter_turns, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorCode::ValidationError, "raster scale must be positive");
  PieceMask mask;
  mask.piece_id = piece.id;
  mask.quarter_turns = ((quarter_turns % 4) + 4) % 4;
  mask.scale = scale;

  std::vector<Polygon> parts;
  for (const auto& part : piece.parts) {
    Polygon rotated;
    for (const Point& p : part.vertices()) rotated.push_back(rotate_quarter(p, mask.quarter_turns));
    parts.push_back(std::move(rotated));
  }
  Polygon all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  const Bounds b = bounds(all);
  mask.bbox_min = {b.min_x, b.min_y};
  mask.width = b.max_x - b.min_x;
  mask.height = b.max_y - b.min_y;
  mask.cols = std::max(1, static_cast<int>(std::ceil(mask.width / scale)));
  mask.rows = std::max(1, static_cast<int>(std::ceil(mask.height / scale)));
  mask.coarse = mask.width < scale || mask.height < scale;

  std::vector<std::vector<bool>> grid(mask.rows, std::vector<bool>(mask.cols, false));
  for (auto& part : parts) {
    for (Point& p : part) p = p - mask.bbox_min;
    const Bounds pb = bounds(part);
    const int r0 = std::max(0, static_cast<int>(std::floor(pb.min_y / scale)));
    const int r1 = std::min(mask.rows - 1, static_cast<int>(std::ceil(pb.max_y / scale)) - 1);
    for (int r = r0; r <= r1; ++r) {
      const double y0 = r * scale, y1 = (r + 1) * scale;
      const Polygon band{{pb.min_x - 1.0, y0}, {pb.max_x + 1.0, y0},
                         {pb.max_x + 1.0, y1}, {pb.min_x - 1.0, y1}};
      const Polygon piece_band = clip_convex(part, band);
      if (piece_band.size() < 3 || !(area(piece_band) > 0.0)) continue;
      const Bounds cb = bounds(piece_band);
      const int c0 = std::max(0, static_cast<int>(std::floor(cb.min_x / scale)));
      const int c1 = std::min(mask.cols - 1, static_cast<int>(std::ceil(cb.max_x / scale)) - 1);
      for (int c = c0; c <= c1; ++c) grid[r][c] = true;
    }
  }

  mask.column_bits.assign(mask.cols, std::vector<std::uint64_t>(word_count(mask.rows), 0));
  for (int r = 0; r < mask.rows; ++r) {
    for (int c = 0; c < mask.cols; ++c) {
      if (!grid[r][c]) continue;
      mask.cells.push_back({r, c});
      mask.column_bits[c][r / 64] |= std::uint64_t{1} << (r % 64);
    }
  }
  return mask;
}

RasterGrid::RasterGrid(double strip_width, double scale)
    : strip_width_(strip_width), scale_(scale) {
  if (!(strip_width > 0.0) || !(scale > 0.0)) {
    throw Error(ErrorCode::ValidationError, "strip width and raster scale must be positive");
  }
  width_cells_ = std::max(1, static_cast<int>(std::ceil(strip_width / scale - 1e-9)));
  words_ = word_count(width_cells_);
}

int RasterGrid::max_row(const PieceMask& mask) const {
  const double slack = 1e-9 * std::max(1.0, strip_width_);
  if (mask.height > strip_width_ + slack) return -1;
  const int by_length =
      static_cast<int>(std::floor((strip_width_ - mask.height + slack) / scale_));
  return std::min(by_length, width_cells_ - mask.rows);
}

bool RasterGrid::fits_width(const PieceMask& mask) const { return max_row(mask) >= 0; }

bool RasterGrid::occupied(int row, int col) const {
  if (col < 0 || col >= used_cols() || row < 0 || row >= width_cells_) return false;
  return (columns_[col][row / 64] >> (row % 64)) & 1U;
}

bool RasterGrid::collides(const PieceMask& mask, GridPosition pos) const {
  const std::size_t q0 = static_cast<std::size_t>(pos.row) / 64;
  const int shift = pos.row % 64;
  for (int a = 0; a < mask.cols; ++a) {
    const int c = pos.col + a;
    if (c >= used_cols()) break;
    const auto& occ = columns_[c];
    const auto& bits = mask.column_bits[a];
    for (std::size_t k = 0; k < bits.size(); ++k) {
      const std::uint64_t m = bits[k];
      if (m == 0) continue;
      const std::size_t q = q0 + k;
      if (q < words_ && (occ[q] & (m << shift))) return true;
      if (shift > 0 && q + 1 < words_ && (occ[q + 1] & (m >> (64 - shift)))) return true;
    }
  }
  return false;
}

void RasterGrid::occupy(const PieceMask& mask, GridPosition pos) {
  const int need = pos.col + mask.cols;
  while (used_cols() < need) columns_.emplace_back(words_, 0);
  for (const Cell& cell : mask.cells) {
    const int r = pos.row + cell.row;
    columns_[pos.col + cell.col][r / 64] |= std::uint64_t{1} << (r % 64);
  }
}

GridPosition RasterGrid::bottom_left(const PieceMask& mask) const {
  const int top = max_row(mask);
  if (top < 0) {
    throw Error(ErrorCode::DoesNotFit, "piece '" + mask.piece_id + "' is taller than the strip");
  }
  for (int col = 0;; ++col) {
    for (int row = 0; row <= top; ++row) {
      if (!collides(mask, {col, row})) return {col, row};
    }
  }
}

std::vector<GridPosition> bottom_left_place(std::span<const PieceMask* const> masks,
                                            RasterGrid& grid) {
  std::vector<GridPosition> out;
  out.reserve(masks.size());
  for (const PieceMask* m : masks) {
    const GridPosition pos = grid.bottom_left(*m);
    grid.occupy(*m, pos);
    out.push_back(pos);
  }
  return out;
}

Placement placement_for(const PieceMask& mask, GridPosition pos) {
  return {pos.col * mask.scale - mask.bbox_min.x, pos.row * mask.scale - mask.bbox_min.y,
          mask.angle()};
}

MaskSet build_masks(std::span<const Piece> pieces, double strip_width, double scale) {
  const auto t0 = Clock::now();
  MaskSet set;
  set.scale = scale;
  const RasterGrid probe(strip_width, scale);
  for (const Piece& piece : pieces) {
    std::array<std::optional<PieceMask>, 4> rot;
    bool any = false;
    for (int q = 0; q < 4; ++q) {
      PieceMask m = rasterize(piece, q, scale);
      if (probe.fits_width(m)) {
        rot[q] = std::move(m);
        any = true;
      }
    }
    if (!any) {
      throw Error(ErrorCode::DoesNotFit,
                  "piece '" + piece.id + "' is wider than the strip at every rotation");
    }
    set.masks.push_back(std::move(rot));
  }
  set.build_seconds = seconds_since(t0);
  return set;
}

SeedLayout generate_start(double strip_width, std::span<const Piece> pieces,
                          const SeedOptions& opts, const MaskSet* masks) {
  if (opts.iterations < 1) throw Error(ErrorCode::ValidationError, "iterations must be >= 1");
  if (pieces.empty()) throw Error(ErrorCode::EmptyInstance, "no pieces to place");
  const auto t0 = Clock::now();
  MaskSet own;
  if (masks == nullptr) {
    own = build_masks(pieces, strip_width, opts.scale);
    masks = &own;
  }
  if (masks->masks.size() != pieces.size()) {
    throw Error(ErrorCode::DimensionMismatch, "mask set does not match the piece list");
  }

  const std::size_t n = pieces.size();
  std::vector<std::vector<int>> fitting(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int q = 0; q < 4; ++q) {
      if (masks->masks[i][q]) fitting[i].push_back(q);
    }
  }

  SeedLayout best;
  best.length = std::numeric_limits<double>::infinity();
  std::vector<GridPosition> best_pos;
  std::vector<int> order(n), turns(n);
  std::vector<const PieceMask*> seq(n);
  for (int it = 0; it < opts.iterations; ++it) {
    std::mt19937_64 rng(derive_seed(opts.rng_seed, static_cast<std::uint64_t>(it)));
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t k = n; k > 1; --k) {
      std::swap(order[k - 1], order[bounded(rng, k)]);
    }
    for (std::size_t k = 0; k < n; ++k) {
      const auto& fit = fitting[order[k]];
      turns[order[k]] = fit[bounded(rng, fit.size())];
      seq[k] = &*masks->masks[order[k]][turns[order[k]]];
    }
    RasterGrid grid(strip_width, masks->scale);
    const auto pos = bottom_left_place(seq, grid);
    double length = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      length = std::max(length, pos[k].col * masks->scale + seq[k]->width);
    }
    if (length < best.length) {
      best.length = length;
      best.best_iteration = it;
      best.order = order;
      best.quarter_turns = turns;
      best_pos = pos;
    }
  }

  best.placements.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const int i = best.order[k];
    best.placements[i] = placement_for(*masks->masks[i][best.quarter_turns[i]], best_pos[k]);
  }
  best.length = layout_length(best.placements, pieces);
  const auto pairs = enumerate_pairs(pieces);
  best.lines = init_lines(best.placements, pieces, pairs);
  best.raster_seconds = masks == &own ? own.build_seconds : masks->build_seconds;
  best.total_seconds = seconds_since(t0) + (masks == &own ? 0.0 : masks->build_seconds);
  return best;
}

std::vector<SeparationLineVar> init_lines(std::span<const Placement> placements,
                                          std::span<const Piece> pieces,
                                          std::span<const PairIndex> pairs) {
  if (placements.size() != pieces.size()) {
    throw Error(ErrorCode::DimensionMismatch, "placement count does not match piece count");
  }
  std::vector<std::vector<Polygon>> placed(pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (const auto& part : pieces[i].parts) {
      placed[i].push_back(transform(part.vertices(), placements[i]));
    }
  }
  std::vector<SeparationLineVar> lines;
  lines.reserve(pairs.size());
  for (const auto& pr : pairs) {
    const auto sep = separating_axis(placed[pr.piece_i][pr.part_j], placed[pr.piece_r][pr.part_s]);
    if (!sep) {
      throw Error(ErrorCode::NoSeparator, "parts of pieces '" + pieces[pr.piece_i].id + "' and '" +
                                              pieces[pr.piece_r].id + "' overlap");
    }
    // separating_axis leaves the first part on the left; the model wants it on the right.
    lines.push_back({sep->anchor.x, sep->anchor.y, std::remainder(sep->angle + kPi, 2.0 * kPi)});
  }
  return lines;
}

double layout_length(std::span<const Placement> placements, std::span<const Piece> pieces) {
  double length = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (const auto& part : pieces[i].parts) {
      for (const Point& p : part.vertices()) {
        length = std::max(length, transform_vertex(p, placements[i]).x);
      }
    }
  }
  return length;
}

double default_raster_scale(std::string_view instance_name) {
  std::string lower(instance_name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower.starts_with("albano")) return 0.02;
  if (lower.starts_with("dagli")) return 0.5;
  if (lower.starts_with("swim")) return 0.00005;
  return 1.0;
}

}  // namespace nestline
