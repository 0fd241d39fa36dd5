#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "nestline/errors.hpp"
#include "nestline/geometry.hpp"

namespace nestline {
namespace {

bool in_closed_triangle(Point a, Point b, Point c, Point p) {
  return orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0;
}

double angle_at(Point prev, Point cur, Point next) {
  const Point u = prev - cur;
  const Point v = next - cur;
  return std::atan2(std::abs(cross(u, v)), dot(u, v));
}

using Triangle = std::array<int, 3>;

std::vector<Triangle> ear_clip(std::span<const Point> pts, double eps_area) {
  std::vector<int> ring(pts.size());
  std::iota(ring.begin(), ring.end(), 0);
  std::vector<Triangle> tris;
  tris.reserve(pts.size());

  while (ring.size() > 3) {
    const std::size_t m = ring.size();
    int best = -1;
    double best_quality = -1.0;
    for (std::size_t k = 0; k < m; ++k) {
      const int ip = ring[(k + m - 1) % m];
      const int ic = ring[k];
      const int in = ring[(k + 1) % m];
      const Point p = pts[ip], c = pts[ic], n = pts[in];
      if (orient(p, c, n) <= eps_area) continue;
      bool blocked = false;
      for (std::size_t q = 0; q < m && !blocked; ++q) {
        const int iq = ring[q];
        if (iq == ip || iq == ic || iq == in) continue;
        const Point v = pts[iq];
        if (v == p || v == n) continue;
        blocked = in_closed_triangle(p, c, n, v);
      }
      if (blocked) continue;
      // Prefer the best-shaped ear: fewer slivers survive the merge step.
      const double quality =
          std::min({angle_at(p, c, n), angle_at(c, n, p), angle_at(n, p, c)});
      if (quality > best_quality) {
        best_quality = quality;
        best = static_cast<int>(k);
      }
    }
    if (best < 0) {
      std::vector<Point> rest;
      for (int i : ring) rest.push_back(pts[i]);
      if (area(rest) <= eps_area) break;  // only collinear leftovers remain
      throw Error(ErrorCode::Degenerate, "ear clipping found no ear");
    }
    const std::size_t k = static_cast<std::size_t>(best);
    tris.push_back({ring[(k + m - 1) % m], ring[k], ring[(k + 1) % m]});
    ring.erase(ring.begin() + best);
  }
  if (ring.size() == 3 && orient(pts[ring[0]], pts[ring[1]], pts[ring[2]]) > eps_area) {
    tris.push_back({ring[0], ring[1], ring[2]});
  }
  return tris;
}

bool convex_corner(Point prev, Point cur, Point next, double eps) {
  return orient(prev, cur, next) >= -eps;
}

std::ptrdiff_t find_edge(const std::vector<int>& poly, int from, int to) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (poly[i] == from && poly[(i + 1) % poly.size()] == to) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

std::vector<int> rotate_to(const std::vector<int>& poly, std::size_t start) {
  std::vector<int> out(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) out[i] = poly[(start + i) % poly.size()];
  return out;
}

}  // namespace

std::vector<ConvexPart> decompose(std::span<const Point> outline) {
  if (outline.size() < 3) throw Error(ErrorCode::Degenerate, "polygon needs at least 3 vertices");
  if (!is_simple(outline)) throw Error(ErrorCode::SelfIntersecting, "polygon edges cross");
  const double d = diameter(outline);
  const double sa = signed_area(outline);
  if (std::abs(sa) < 1e-12 * d * d) throw Error(ErrorCode::Degenerate, "polygon area is zero");
  if (sa < 0.0) throw Error(ErrorCode::Degenerate, "polygon must be counterclockwise");

  std::vector<ConvexPart> parts;
  if (is_convex_ccw(outline)) {
    parts.emplace_back(Polygon(outline.begin(), outline.end()), 0);
    return parts;
  }

  const double eps_area = 1e-12 * d * d;
  const double eps_convex = 1e-9 * d * d;
  const auto tris = ear_clip(outline, eps_area);

  std::vector<std::vector<int>> polys;
  polys.reserve(tris.size());
  for (const auto& t : tris) polys.push_back({t[0], t[1], t[2]});

  const int n = static_cast<int>(outline.size());
  auto is_boundary = [n](int a, int b) { return (a + 1) % n == b || (b + 1) % n == a; };
  std::vector<std::pair<int, int>> diagonals;
  for (const auto& t : tris) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      if (a < b && !is_boundary(a, b)) diagonals.emplace_back(a, b);
    }
  }
  // Longest diagonals first; index order breaks ties deterministically.
  std::stable_sort(diagonals.begin(), diagonals.end(), [&](auto l, auto r) {
    const double ll = norm(outline[l.first] - outline[l.second]);
    const double lr = norm(outline[r.first] - outline[r.second]);
    if (ll != lr) return ll > lr;
    return l < r;
  });

  for (const auto& [a, b] : diagonals) {
    std::ptrdiff_t pi = -1, qi = -1, pe = -1, qe = -1;
    for (std::size_t k = 0; k < polys.size(); ++k) {
      if (pi < 0) {
        const auto e = find_edge(polys[k], a, b);
        if (e >= 0) { pi = static_cast<std::ptrdiff_t>(k); pe = e; continue; }
      }
      if (qi < 0) {
        const auto e = find_edge(polys[k], b, a);
        if (e >= 0) { qi = static_cast<std::ptrdiff_t>(k); qe = e; }
      }
    }
    if (pi < 0 || qi < 0) continue;
    // P = [b, ..., a] and Q = [a, ..., b]; merged ring drops the shared edge.
    const auto& P = polys[pi];
    const auto& Q = polys[qi];
    const auto pr = rotate_to(P, (static_cast<std::size_t>(pe) + 1) % P.size());
    const auto qr = rotate_to(Q, (static_cast<std::size_t>(qe) + 1) % Q.size());
    std::vector<int> merged = pr;
    merged.insert(merged.end(), qr.begin() + 1, qr.end() - 1);

    const std::size_t m = merged.size();
    const std::size_t ia = pr.size() - 1;  // position of a
    const auto pt = [&](std::size_t i) { return outline[merged[i % m]]; };
    const bool ok_b = convex_corner(pt(m - 1), pt(0), pt(1), eps_convex);
    const bool ok_a = convex_corner(pt(ia + m - 1), pt(ia), pt(ia + 1), eps_convex);
    if (!ok_a || !ok_b) continue;

    polys[pi] = std::move(merged);
    polys.erase(polys.begin() + qi);
  }

  parts.reserve(polys.size());
  for (std::size_t j = 0; j < polys.size(); ++j) {
    Polygon verts;
    verts.reserve(polys[j].size());
    for (int i : polys[j]) verts.push_back(outline[i]);
    parts.emplace_back(std::move(verts), static_cast<int>(j));
  }
  return parts;
}

}  // namespace nestline
