#include "nestline/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nestline/errors.hpp"

namespace nestline {

std::vector<PairIndex> enumerate_pairs(std::span<const Piece> pieces) {
  std::vector<PairIndex> out;
  const int n = static_cast<int>(pieces.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < static_cast<int>(pieces[i].parts.size()); ++j) {
      for (int r = i + 1; r < n; ++r) {
        for (int s = 0; s < static_cast<int>(pieces[r].parts.size()); ++s) {
          out.push_back({i, j, r, s});
        }
      }
    }
  }
  return out;
}

std::int64_t pair_count_formula(std::span<const int> parts_per_piece) {
  std::int64_t total = 0;
  for (int p : parts_per_piece) total += p;
  std::int64_t prefix = 0;
  std::int64_t q = 0;
  for (std::size_t i = 0; i + 1 < parts_per_piece.size(); ++i) {
    prefix += parts_per_piece[i];
    q += parts_per_piece[i] * (total - prefix);
  }
  return q;
}

PlacedVertex placed_vertex(Point local, const Placement& pl) {
  const double c = std::cos(pl.theta);
  const double s = std::sin(pl.theta);
  PlacedVertex out;
  out.x = local.x * c - local.y * s + pl.tx;
  out.y = local.x * s + local.y * c + pl.ty;
  out.dx_dtheta = -local.x * s - local.y * c;
  out.dy_dtheta = local.x * c - local.y * s;
  return out;
}

SeparationResidual separation_residual(Point local, const Placement& pl,
                                       const SeparationLineVar& line, LineSide side) {
  const PlacedVertex p = placed_vertex(local, pl);
  const double c = std::cos(line.alpha);
  const double s = std::sin(line.alpha);
  const double dy = p.y - line.y_bar;
  const double dx = p.x - line.x_bar;
  const double sign = side == LineSide::Left ? 1.0 : -1.0;
  SeparationResidual out;
  out.value = sign * (dy * c - dx * s);
  out.gradient = {sign * -s,
                  sign * c,
                  sign * (-s * p.dx_dtheta + c * p.dy_dtheta),
                  sign * s,
                  sign * -c,
                  sign * (-dy * s - dx * c)};
  return out;
}

NlpProblem::NlpProblem(double strip_width, std::vector<Piece> pieces, std::vector<PairIndex> pairs,
                       std::optional<double> z_upper)
    : strip_width_(strip_width), pieces_(std::move(pieces)), pairs_(std::move(pairs)) {
  if (pieces_.empty()) throw Error(ErrorCode::EmptyInstance, "no pieces to place");
  if (!(strip_width_ > 0.0)) throw Error(ErrorCode::ValidationError, "strip width must be positive");

  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    piece_first_part_.push_back(parts_.size());
    for (const auto& part : pieces_[i].parts) {
      parts_.push_back({static_cast<int>(i), local_.size(), part.size()});
      for (const Point& v : part.vertices()) {
        local_.push_back(v);
        vertex_piece_.push_back(static_cast<int>(i));
      }
    }
    total_area_ += pieces_[i].area();
  }
  piece_first_part_.push_back(parts_.size());
  vertex_total_ = local_.size();

  std::size_t row = 4 * vertex_total_;
  pair_row_begin_.reserve(pairs_.size() + 1);
  for (const auto& pr : pairs_) {
    if (pr.piece_i >= pr.piece_r || pr.piece_r >= static_cast<int>(pieces_.size())) {
      throw Error(ErrorCode::ValidationError, "pair must reference two distinct pieces, i < r");
    }
    pair_row_begin_.push_back(row);
    row += pieces_[pr.piece_i].parts.at(pr.part_j).size() +
           pieces_[pr.piece_r].parts.at(pr.part_s).size();
  }
  pair_row_begin_.push_back(row);
  constraint_count_ = row;
  dimension_ = 1 + 3 * pieces_.size() + 3 * pairs_.size();

  constexpr double inf = std::numeric_limits<double>::infinity();
  lower_.assign(dimension_, -inf);
  upper_.assign(dimension_, inf);
  lower_[z_index()] = total_area_ / strip_width_;
  if (z_upper) upper_[z_index()] = std::max(*z_upper, lower_[z_index()]);
}

void NlpProblem::check_dimension(std::span<const double> v) const {
  if (v.size() != dimension_) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(dimension_) +
                                                  " variables, got " + std::to_string(v.size()));
  }
}

void NlpProblem::place_all(std::span<const double> v, std::vector<Point>& placed) const {
  placed.resize(vertex_total_);
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const std::size_t o = piece_offset(i);
    const double tx = v[o], ty = v[o + 1];
    const double c = std::cos(v[o + 2]), s = std::sin(v[o + 2]);
    const std::size_t first = parts_[piece_first_part_[i]].begin;
    const std::size_t last = piece_first_part_[i + 1] < parts_.size()
                                 ? parts_[piece_first_part_[i + 1]].begin
                                 : vertex_total_;
    for (std::size_t k = first; k < last; ++k) {
      const Point p = local_[k];
      placed[k] = {p.x * c - p.y * s + tx, p.x * s + p.y * c + ty};
    }
  }
}

double NlpProblem::objective(std::span<const double> v) const {
  check_dimension(v);
  return v[z_index()];
}

void NlpProblem::objective_gradient(std::span<const double> v, std::span<double> grad) const {
  check_dimension(v);
  std::fill(grad.begin(), grad.end(), 0.0);
  grad[z_index()] = 1.0;
}

void NlpProblem::constraints(std::span<const double> v, std::span<double> g) const {
  check_dimension(v);
  std::vector<Point> placed;
  place_all(v, placed);
  const double z = v[z_index()];
  for (std::size_t k = 0; k < vertex_total_; ++k) {
    const Point p = placed[k];
    g[4 * k + 0] = -p.y;
    g[4 * k + 1] = p.y - strip_width_;
    g[4 * k + 2] = -p.x;
    g[4 * k + 3] = p.x - z;
  }
  for (std::size_t l = 0; l < pairs_.size(); ++l) {
    const auto& pr = pairs_[l];
    const PartRef& a = parts_[piece_first_part_[pr.piece_i] + pr.part_j];
    const PartRef& b = parts_[piece_first_part_[pr.piece_r] + pr.part_s];
    const std::size_t o = line_offset(l);
    const double xb = v[o], yb = v[o + 1];
    const double c = std::cos(v[o + 2]), s = std::sin(v[o + 2]);
    std::size_t row = pair_row_begin_[l];
    for (std::size_t k = a.begin; k < a.begin + a.size; ++k) {
      g[row++] = (placed[k].y - yb) * c - (placed[k].x - xb) * s;
    }
    for (std::size_t k = b.begin; k < b.begin + b.size; ++k) {
      g[row++] = -((placed[k].y - yb) * c - (placed[k].x - xb) * s);
    }
  }
}

void NlpProblem::add_weighted_constraint_gradients(std::span<const double> v,
                                                   std::span<const double> weights,
                                                   std::span<double> grad) const {
  check_dimension(v);
  std::vector<Point> placed;
  place_all(v, placed);

  for (std::size_t k = 0; k < vertex_total_; ++k) {
    const double w0 = weights[4 * k + 0], w1 = weights[4 * k + 1];
    const double w2 = weights[4 * k + 2], w3 = weights[4 * k + 3];
    if (w0 == 0.0 && w1 == 0.0 && w2 == 0.0 && w3 == 0.0) continue;
    const std::size_t o = piece_offset(static_cast<std::size_t>(vertex_piece_[k]));
    const double rx = placed[k].x - v[o];      // = dy/dtheta
    const double ry = placed[k].y - v[o + 1];  // = -dx/dtheta
    const double wy = w1 - w0;
    const double wx = w3 - w2;
    grad[o] += wx;
    grad[o + 1] += wy;
    grad[o + 2] += wy * rx - wx * ry;
    grad[z_index()] -= w3;
  }

  for (std::size_t l = 0; l < pairs_.size(); ++l) {
    const auto& pr = pairs_[l];
    const PartRef& a = parts_[piece_first_part_[pr.piece_i] + pr.part_j];
    const PartRef& b = parts_[piece_first_part_[pr.piece_r] + pr.part_s];
    const std::size_t lo = line_offset(l);
    const double xb = v[lo], yb = v[lo + 1];
    const double c = std::cos(v[lo + 2]), s = std::sin(v[lo + 2]);
    std::size_t row = pair_row_begin_[l];

    auto block = [&](const PartRef& part, double sign) {
      const std::size_t po = piece_offset(static_cast<std::size_t>(part.piece));
      const double tx = v[po], ty = v[po + 1];
      double gtx = 0.0, gty = 0.0, gth = 0.0, gxb = 0.0, gyb = 0.0, gal = 0.0;
      for (std::size_t k = part.begin; k < part.begin + part.size; ++k, ++row) {
        const double w = weights[row];
        if (w == 0.0) continue;
        const double sw = sign * w;
        const double dx = placed[k].x - xb;
        const double dy = placed[k].y - yb;
        gtx += -s * sw;
        gty += c * sw;
        gth += (s * (placed[k].y - ty) + c * (placed[k].x - tx)) * sw;
        gxb += s * sw;
        gyb += -c * sw;
        gal += (-dy * s - dx * c) * sw;
      }
      grad[po] += gtx;
      grad[po + 1] += gty;
      grad[po + 2] += gth;
      grad[lo] += gxb;
      grad[lo + 1] += gyb;
      grad[lo + 2] += gal;
    };
    block(a, 1.0);
    block(b, -1.0);
  }
}

ConstraintFamily NlpProblem::family(std::size_t c) const {
  if (c < 4 * vertex_total_) {
    return (c % 4) < 2 ? ConstraintFamily::ContainmentY : ConstraintFamily::ContainmentX;
  }
  return ConstraintFamily::Separation;
}

std::vector<int> NlpProblem::pieces_of(std::size_t c) const {
  if (c < 4 * vertex_total_) return {vertex_piece_[c / 4]};
  const auto it = std::upper_bound(pair_row_begin_.begin(), pair_row_begin_.end(), c);
  const std::size_t l = static_cast<std::size_t>(it - pair_row_begin_.begin()) - 1;
  return {pairs_[l].piece_i, pairs_[l].piece_r};
}

std::vector<SparseEntry> NlpProblem::constraint_gradient(std::size_t c,
                                                         std::span<const double> v) const {
  check_dimension(v);
  std::vector<SparseEntry> out;
  if (c < 4 * vertex_total_) {
    const std::size_t k = c / 4;
    const std::size_t o = piece_offset(static_cast<std::size_t>(vertex_piece_[k]));
    const Placement pl{v[o], v[o + 1], v[o + 2]};
    const PlacedVertex p = placed_vertex(local_[k], pl);
    switch (c % 4) {
      case 0: out = {{o + 1, -1.0}, {o + 2, -p.dy_dtheta}}; break;
      case 1: out = {{o + 1, 1.0}, {o + 2, p.dy_dtheta}}; break;
      case 2: out = {{o, -1.0}, {o + 2, -p.dx_dtheta}}; break;
      default: out = {{z_index(), -1.0}, {o, 1.0}, {o + 2, p.dx_dtheta}}; break;
    }
    return out;
  }
  const auto it = std::upper_bound(pair_row_begin_.begin(), pair_row_begin_.end(), c);
  const std::size_t l = static_cast<std::size_t>(it - pair_row_begin_.begin()) - 1;
  const auto& pr = pairs_[l];
  const PartRef& a = parts_[piece_first_part_[pr.piece_i] + pr.part_j];
  const PartRef& b = parts_[piece_first_part_[pr.piece_r] + pr.part_s];
  const std::size_t offset = c - pair_row_begin_[l];
  const bool left = offset < a.size;
  const PartRef& part = left ? a : b;
  const std::size_t k = part.begin + (left ? offset : offset - a.size);
  const std::size_t po = piece_offset(static_cast<std::size_t>(part.piece));
  const std::size_t lo = line_offset(l);
  const Placement pl{v[po], v[po + 1], v[po + 2]};
  const SeparationLineVar line{v[lo], v[lo + 1], v[lo + 2]};
  const auto r = separation_residual(local_[k], pl, line, left ? LineSide::Left : LineSide::Right);
  for (std::size_t q = 0; q < 3; ++q) out.push_back({po + q, r.gradient[q]});
  for (std::size_t q = 0; q < 3; ++q) out.push_back({lo + q, r.gradient[3 + q]});
  return out;
}

std::vector<double> NlpProblem::encode(double z, std::span<const Placement> placements,
                                       std::span<const SeparationLineVar> lines) const {
  if (placements.size() != pieces_.size() || lines.size() != pairs_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "placement or line count does not match problem");
  }
  std::vector<double> v(dimension_);
  v[z_index()] = z;
  for (std::size_t i = 0; i < placements.size(); ++i) {
    const std::size_t o = piece_offset(i);
    v[o] = placements[i].tx;
    v[o + 1] = placements[i].ty;
    v[o + 2] = placements[i].theta;
  }
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const std::size_t o = line_offset(l);
    v[o] = lines[l].x_bar;
    v[o + 1] = lines[l].y_bar;
    v[o + 2] = lines[l].alpha;
  }
  return v;
}

std::vector<Placement> NlpProblem::placements(std::span<const double> v) const {
  check_dimension(v);
  std::vector<Placement> out(pieces_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t o = piece_offset(i);
    out[i] = {v[o], v[o + 1], v[o + 2]};
  }
  return out;
}

std::vector<SeparationLineVar> NlpProblem::lines(std::span<const double> v) const {
  check_dimension(v);
  std::vector<SeparationLineVar> out(pairs_.size());
  for (std::size_t l = 0; l < out.size(); ++l) {
    const std::size_t o = line_offset(l);
    out[l] = {v[o], v[o + 1], v[o + 2]};
  }
  return out;
}

NlpProblem build_problem(double strip_width, std::vector<Piece> pieces,
                         std::optional<double> z_upper) {
  auto pairs = enumerate_pairs(pieces);
  return NlpProblem(strip_width, std::move(pieces), std::move(pairs), z_upper);
}

FeasibilityReport check_layout(const NlpProblem& problem, double z,
                               std::span<const Placement> placements) {
  if (placements.size() != problem.piece_count()) {
    throw Error(ErrorCode::DimensionMismatch, "placement count does not match piece count");
  }
  FeasibilityReport rep;
  const auto& pieces = problem.pieces();
  const double e = problem.strip_width();
  std::vector<std::vector<Polygon>> placed(pieces.size());
  rep.min_part_area = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (const auto& part : pieces[i].parts) {
      placed[i].push_back(transform(part.vertices(), placements[i]));
      rep.min_part_area = std::min(rep.min_part_area, part.area());
      for (const Point& p : placed[i].back()) {
        rep.containment_y = std::max({rep.containment_y, -p.y, p.y - e});
        rep.containment_x = std::max({rep.containment_x, -p.x, p.x - z});
      }
    }
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t r = i + 1; r < pieces.size(); ++r) {
      for (const auto& a : placed[i]) {
        for (const auto& b : placed[r]) {
          const double ov = overlap_area(a, b);
          if (ov > rep.max_overlap_area) {
            rep.max_overlap_area = ov;
            rep.worst_pair = std::make_pair(pieces[i].id, pieces[r].id);
          }
        }
      }
    }
  }
  rep.max_violation = std::max(rep.containment_y, rep.containment_x);
  return rep;
}

FeasibilityReport check_feasibility(std::span<const double> v, const NlpProblem& problem) {
  if (v.size() != problem.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(problem.dimension()) +
                                                  " variables, got " + std::to_string(v.size()));
  }
  const auto pl = problem.placements(v);
  FeasibilityReport rep = check_layout(problem, v[NlpProblem::z_index()], pl);

  std::vector<double> g(problem.constraint_count());
  problem.constraints(v, g);
  rep.containment_y = rep.containment_x = rep.separation = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < g.size(); ++c) {
    switch (problem.family(c)) {
      case ConstraintFamily::ContainmentY: rep.containment_y = std::max(rep.containment_y, g[c]); break;
      case ConstraintFamily::ContainmentX: rep.containment_x = std::max(rep.containment_x, g[c]); break;
      case ConstraintFamily::Separation: rep.separation = std::max(rep.separation, g[c]); break;
    }
  }
  const auto lo = problem.lower_bounds();
  const auto hi = problem.upper_bounds();
  rep.bounds = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    rep.bounds = std::max({rep.bounds, lo[k] - v[k], v[k] - hi[k]});
  }
  rep.max_violation = std::max({rep.containment_y, rep.containment_x, rep.separation, rep.bounds});
  return rep;
}

}  // namespace nestline
