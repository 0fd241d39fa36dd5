#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nestline {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point, Point) = default;
};

using Polygon = std::vector<Point>;

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
/// Cross product of (b - a) and (c - a); positive when a, b, c turn left.
constexpr double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }
inline double norm(Point a) { return std::hypot(a.x, a.y); }

double signed_area(std::span<const Point> poly);
double area(std::span<const Point> poly);
/// Largest pairwise vertex distance.
double diameter(std::span<const Point> poly);

struct Bounds {
  double min_x, min_y, max_x, max_y;
};
Bounds bounds(std::span<const Point> poly);

/// True when the closed polygon boundary has no crossing or overlapping edges.
bool is_simple(std::span<const Point> poly);

/// Convexity up to the collinearity tolerance `tol * diameter^2`, counterclockwise.
bool is_convex_ccw(std::span<const Point> poly, double tol = 1e-9);

/// Rigid placement of a piece: rotation `theta` (radians, counterclockwise) about
/// the piece reference point, then translation by (tx, ty).
struct Placement {
  double tx = 0.0;
  double ty = 0.0;
  double theta = 0.0;
};

Point transform_vertex(Point v, const Placement& pl);
Polygon transform(std::span<const Point> poly, const Placement& pl);

/// A convex polygon in the local frame of its owning piece.
class ConvexPart {
 public:
  /// Validates vertex count, orientation, convexity and non-coincident neighbours.
  /// Throws Error(Degenerate) on violation.
  ConvexPart(Polygon vertices, int part_index);

  const Polygon& vertices() const noexcept { return vertices_; }
  int part_index() const noexcept { return part_index_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  double area() const;

 private:
  Polygon vertices_;
  int part_index_;
};

struct Piece {
  std::string id;
  Polygon outline;  // counterclockwise, reference vertex at (0, 0)
  std::vector<ConvexPart> parts;
  Point reference{0.0, 0.0};

  double area() const { return nestline::area(outline); }
  std::size_t vertex_count() const;  // total over parts
};

/// Splits a simple counterclockwise polygon into interior-disjoint convex parts
/// (ear clipping followed by Hertel-Mehlhorn merging of triangles).
/// Throws Error(SelfIntersecting) or Error(Degenerate).
std::vector<ConvexPart> decompose(std::span<const Point> outline);

/// Orients `outline` counterclockwise, moves the vertex nearest the input origin
/// to (0, 0) and decomposes it. Ties on distance go to the lowest input index.
Piece normalize_piece(std::string id, std::span<const Point> outline);

/// Same as above but with caller-supplied convex parts given in the input frame.
/// The parts are validated against the outline (area sum and disjointness).
Piece normalize_piece(std::string id, std::span<const Point> outline,
                      const std::vector<Polygon>& parts);

/// Area of the intersection of two convex counterclockwise polygons.
double overlap_area(std::span<const Point> a, std::span<const Point> b);

/// Clips convex `subject` against convex counterclockwise `clip`.
Polygon clip_convex(std::span<const Point> subject, std::span<const Point> clip);

struct SeparatingLine {
  Point anchor;
  double angle = 0.0;  // direction of the line, radians
};

/// Finds a line with every vertex of `a` on its left (or on it) and every vertex
/// of `b` on its right (or on it), where left means a non-negative cross product
/// with the line direction. Returns nullopt when the interiors overlap by more
/// than `tol * max(diameter(a), diameter(b))`.
std::optional<SeparatingLine> separating_axis(std::span<const Point> a,
                                              std::span<const Point> b,
                                              double tol = 1e-9);

/// Signed distance of `p` from the line: positive on the left of the direction.
double side_of(const SeparatingLine& line, Point p);

}  // namespace nestline
