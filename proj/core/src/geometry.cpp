#include "nestline/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nestline/errors.hpp"

namespace nestline {

double signed_area(std::span<const Point> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(poly[i], poly[(i + 1) % n]);
  }
  return 0.5 * twice;
}

double area(std::span<const Point> poly) { return std::abs(signed_area(poly)); }

double diameter(std::span<const Point> poly) {
  double best = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    for (std::size_t j = i + 1; j < poly.size(); ++j) {
      best = std::max(best, norm(poly[i] - poly[j]));
    }
  }
  return best;
}

Bounds bounds(std::span<const Point> poly) {
  Bounds b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Point& p : poly) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  const int d1 = sign(orient(q1, q2, p1));
  const int d2 = sign(orient(q1, q2, p2));
  const int d3 = sign(orient(p1, p2, q1));
  const int d4 = sign(orient(p1, p2, q2));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

}  // namespace

bool is_simple(std::span<const Point> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = poly[i];
    const Point b = poly[(i + 1) % n];
    // Adjacent edges may only meet at their shared vertex: reject fold-backs.
    const Point c = poly[(i + 2) % n];
    if (orient(a, b, c) == 0.0 && dot(a - b, c - b) > 0.0) return false;
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(a, b, poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

bool is_convex_ccw(std::span<const Point> poly, double tol) {
  const std::size_t n = poly.size();
  if (n < 3 || signed_area(poly) <= 0.0) return false;
  const double d = diameter(poly);
  const double eps = tol * d * d;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = poly[i];
    const Point b = poly[(i + 1) % n];
    for (std::size_t k = 0; k < n; ++k) {
      if (orient(a, b, poly[k]) < -eps) return false;
    }
  }
  return true;
}

Point transform_vertex(Point v, const Placement& pl) {
  const double c = std::cos(pl.theta);
  const double s = std::sin(pl.theta);
  return {v.x * c - v.y * s + pl.tx, v.x * s + v.y * c + pl.ty};
}

Polygon transform(std::span<const Point> poly, const Placement& pl) {
  const double c = std::cos(pl.theta);
  const double s = std::sin(pl.theta);
  Polygon out;
  out.reserve(poly.size());
  for (const Point& v : poly) out.push_back({v.x * c - v.y * s + pl.tx, v.x * s + v.y * c + pl.ty});
  return out;
}

ConvexPart::ConvexPart(Polygon vertices, int part_index)
    : vertices_(std::move(vertices)), part_index_(part_index) {
  if (vertices_.size() < 3) {
    throw Error(ErrorCode::Degenerate, "convex part needs at least 3 vertices");
  }
  const double d = diameter(vertices_);
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (norm(vertices_[i] - vertices_[(i + 1) % vertices_.size()]) <= 1e-12 * d) {
      throw Error(ErrorCode::Degenerate, "convex part has coincident consecutive vertices");
    }
  }
  if (signed_area(vertices_) <= 0.0) {
    throw Error(ErrorCode::Degenerate, "convex part is not counterclockwise");
  }
  if (!is_convex_ccw(vertices_)) {
    throw Error(ErrorCode::Degenerate, "part is not convex");
  }
}

double ConvexPart::area() const { return signed_area(vertices_); }

std::size_t Piece::vertex_count() const {
  std::size_t total = 0;
  for (const auto& part : parts) total += part.size();
  return total;
}

namespace {

struct Prepared {
  Polygon outline;       // counterclockwise, translated, reference first
  Point offset;          // subtracted from input coordinates
  bool reversed = false;
};

Prepared prepare_outline(std::span<const Point> input) {
  if (input.size() < 3) {
    throw Error(ErrorCode::Degenerate, "outline needs at least 3 vertices");
  }
  for (const Point& p : input) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::Degenerate, "outline has a non-finite coordinate");
    }
  }
  const double d = diameter(input);
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (norm(input[i] - input[(i + 1) % input.size()]) <= 1e-12 * d) {
      throw Error(ErrorCode::Degenerate, "outline has coincident consecutive vertices");
    }
  }
  if (!is_simple(input)) {
    throw Error(ErrorCode::SelfIntersecting, "outline edges cross");
  }
  const double sa = signed_area(input);
  if (std::abs(sa) < 1e-12 * d * d) {
    throw Error(ErrorCode::Degenerate, "outline area is zero");
  }

  std::size_t ref = 0;
  double best = norm(input[0]);
  for (std::size_t i = 1; i < input.size(); ++i) {
    const double r = norm(input[i]);
    if (r < best) {
      best = r;
      ref = i;
    }
  }

  Prepared out;
  out.offset = input[ref];
  out.reversed = sa < 0.0;
  const std::size_t n = input.size();
  out.outline.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Walk forward (or backward when clockwise) starting at the reference vertex.
    const std::size_t idx = out.reversed ? (ref + n - k) % n : (ref + k) % n;
    out.outline.push_back(input[idx] - out.offset);
  }
  out.outline[0] = {0.0, 0.0};
  return out;
}

}  // namespace

Piece normalize_piece(std::string id, std::span<const Point> outline) {
  Prepared prep = prepare_outline(outline);
  Piece piece;
  piece.id = std::move(id);
  piece.parts = decompose(prep.outline);
  piece.outline = std::move(prep.outline);
  return piece;
}

Piece normalize_piece(std::string id, std::span<const Point> outline,
                      const std::vector<Polygon>& parts) {
  if (parts.empty()) return normalize_piece(std::move(id), outline);
  Prepared prep = prepare_outline(outline);
  Piece piece;
  piece.id = std::move(id);
  double total = 0.0;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    Polygon local;
    local.reserve(parts[j].size());
    for (const Point& p : parts[j]) local.push_back(p - prep.offset);
    if (signed_area(local) < 0.0) std::reverse(local.begin(), local.end());
    try {
      piece.parts.emplace_back(std::move(local), static_cast<int>(j));
    } catch (const Error& e) {
      throw Error(ErrorCode::ValidationError,
                  "piece '" + piece.id + "' part " + std::to_string(j) + ": " + e.what());
    }
    total += piece.parts.back().area();
  }
  const double outline_area = area(prep.outline);
  if (std::abs(total - outline_area) > 1e-9 * outline_area) {
    throw Error(ErrorCode::ValidationError,
                "piece '" + piece.id + "': part areas do not sum to the outline area");
  }
  for (std::size_t a = 0; a < piece.parts.size(); ++a) {
    for (std::size_t b = a + 1; b < piece.parts.size(); ++b) {
      if (overlap_area(piece.parts[a].vertices(), piece.parts[b].vertices()) >
          1e-9 * outline_area) {
        throw Error(ErrorCode::ValidationError, "piece '" + piece.id + "': parts overlap");
      }
    }
  }
  piece.outline = std::move(prep.outline);
  return piece;
}

Polygon clip_convex(std::span<const Point> subject, std::span<const Point> clip) {
  Polygon output(subject.begin(), subject.end());
  const std::size_t m = clip.size();
  for (std::size_t i = 0; i < m && !output.empty(); ++i) {
    const Point a = clip[i];
    const Point b = clip[(i + 1) % m];
    Polygon input;
    input.swap(output);
    for (std::size_t k = 0; k < input.size(); ++k) {
      const Point cur = input[k];
      const Point prev = input[(k + input.size() - 1) % input.size()];
      const double dc = orient(a, b, cur);
      const double dp = orient(a, b, prev);
      if (dc >= 0.0) {
        if (dp < 0.0) output.push_back(prev + (dp / (dp - dc)) * (cur - prev));
        output.push_back(cur);
      } else if (dp >= 0.0) {
        output.push_back(prev + (dp / (dp - dc)) * (cur - prev));
      }
    }
  }
  return output;
}

double overlap_area(std::span<const Point> a, std::span<const Point> b) {
  const Bounds ba = bounds(a);
  const Bounds bb = bounds(b);
  if (ba.max_x <= bb.min_x || bb.max_x <= ba.min_x || ba.max_y <= bb.min_y ||
      bb.max_y <= ba.min_y) {
    return 0.0;
  }
  return area(clip_convex(a, b));
}

std::optional<SeparatingLine> separating_axis(std::span<const Point> a, std::span<const Point> b,
                                              double tol) {
  double best_gap = -std::numeric_limits<double>::infinity();
  Point best_normal{};
  auto try_axis = [&](Point n) {
    double max_a = -std::numeric_limits<double>::infinity();
    double min_b = std::numeric_limits<double>::infinity();
    for (const Point& p : a) max_a = std::max(max_a, dot(n, p));
    for (const Point& q : b) min_b = std::min(min_b, dot(n, q));
    const double gap = min_b - max_a;
    if (gap > best_gap) {
      best_gap = gap;
      best_normal = n;
    }
  };
  auto outward = [](Point from, Point to) {
    const Point e = to - from;
    const double len = norm(e);
    return Point{e.y / len, -e.x / len};
  };
  for (std::size_t i = 0; i < a.size(); ++i) try_axis(outward(a[i], a[(i + 1) % a.size()]));
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Point n = outward(b[i], b[(i + 1) % b.size()]);
    try_axis({-n.x, -n.y});
  }

  const double scale = std::max(diameter(a), diameter(b));
  if (!(best_gap >= -tol * scale)) return std::nullopt;

  const Point n = best_normal;
  std::size_t support = 0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (dot(n, a[i]) > dot(n, a[support])) support = i;
  }
  const double offset = dot(n, a[support]) + 0.5 * best_gap;
  SeparatingLine line;
  line.anchor = a[support] + (offset - dot(n, a[support])) * n;
  line.angle = std::atan2(n.x, -n.y);
  return line;
}

double side_of(const SeparatingLine& line, Point p) {
  const Point d{std::cos(line.angle), std::sin(line.angle)};
  return cross(d, p - line.anchor);
}

}  // namespace nestline
