#pragma once

#include <random>
#include <string>
#include <vector>

#include "nestline/geometry.hpp"
#include "nestline/instance.hpp"
#include "nestline/model.hpp"
#include "support/oracles.hpp"

#ifndef NESTLINE_DATA_DIR
#define NESTLINE_DATA_DIR "data"
#endif

namespace fixture {

using namespace nestline;

inline Polygon square(double side = 1.0) {
  return {{0, 0}, {side, 0}, {side, side}, {0, side}};
}

inline std::vector<Piece> unit_squares(int count) {
  std::vector<Piece> out;
  for (int i = 0; i < count; ++i) out.push_back(normalize_piece("sq" + std::to_string(i), square()));
  return out;
}

/// Piece with `parts` copies of a triangle; only the part count matters.
inline Piece counted_piece(const std::string& id, int parts) {
  const Polygon tri{{0, 0}, {1, 0}, {0, 1}};
  Piece p;
  p.id = id;
  p.outline = tri;
  for (int j = 0; j < parts; ++j) p.parts.emplace_back(tri, j);
  return p;
}

inline std::vector<Piece> random_convex_pieces(std::mt19937_64& rng, int count) {
  std::vector<Piece> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(normalize_piece("c" + std::to_string(i), oracle::random_convex_polygon(rng, 6, 0, 0, 1.5)));
  }
  return out;
}

inline std::vector<Piece> random_star_pieces(std::mt19937_64& rng, int count) {
  std::vector<Piece> out;
  std::uniform_int_distribution<int> nv(4, 10);
  for (int i = 0; i < count; ++i) {
    Polygon poly = oracle::random_star_polygon(rng, nv(rng), 0.5, 2.0);
    out.push_back(normalize_piece("s" + std::to_string(i), poly));
  }
  return out;
}

inline std::string data_path(const std::string& name) {
  return std::string(NESTLINE_DATA_DIR) + "/" + name + ".json";
}

inline NestingInstance load(const std::string& name) { return parse_instance(data_path(name)); }

/// Random decision vector of the right size.
inline std::vector<double> random_point(const NlpProblem& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> z(1.0, 30.0), t(-5.0, 30.0), a(-7.0, 7.0);
  std::vector<double> v(p.dimension());
  v[0] = z(rng);
  for (std::size_t i = 0; i < p.piece_count(); ++i) {
    const std::size_t o = NlpProblem::piece_offset(i);
    v[o] = t(rng);
    v[o + 1] = t(rng);
    v[o + 2] = a(rng);
  }
  for (std::size_t l = 0; l < p.line_count(); ++l) {
    const std::size_t o = p.line_offset(l);
    v[o] = t(rng);
    v[o + 1] = t(rng);
    v[o + 2] = a(rng);
  }
  return v;
}

}  // namespace fixture
