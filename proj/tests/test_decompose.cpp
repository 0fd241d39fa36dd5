#include <random>

#include "catch_amalgamated.hpp"
#include "nestline/errors.hpp"
#include "nestline/geometry.hpp"
#include "support/oracles.hpp"

using namespace nestline;
using Catch::Approx;

namespace {

// The five quadrilaterals of the arrow-shaped example piece from the paper's
// partition figure, and the outline of their union.
const std::vector<Polygon> kArrowParts{
    {{50.000000, 20.689655}, {55.172414, 15.517241}, {58.620690, 15.517241}, {53.448276, 20.689655}},
    {{46.551724, 25.862069}, {50.000000, 20.689655}, {53.448276, 20.689655}, {50.000000, 25.862069}},
    {{46.551724, 31.034483}, {46.551724, 25.862069}, {50.000000, 25.862069}, {50.000000, 31.034483}},
    {{50.000000, 36.206897}, {46.551724, 31.034483}, {50.000000, 31.034483}, {53.448276, 36.206897}},
    {{55.172414, 41.379310}, {50.000000, 36.206897}, {53.448276, 36.206897}, {58.620690, 41.379310}},
};

const Polygon kArrowOutline{
    {55.172414, 15.517241}, {58.620690, 15.517241}, {53.448276, 20.689655}, {50.000000, 25.862069},
    {50.000000, 31.034483}, {53.448276, 36.206897}, {58.620690, 41.379310}, {55.172414, 41.379310},
    {50.000000, 36.206897}, {46.551724, 31.034483}, {46.551724, 25.862069}, {50.000000, 20.689655},
};

void check_partition(const Polygon& outline, const std::vector<ConvexPart>& parts, double overlap_tol) {
  double sum = 0.0;
  for (const auto& part : parts) {
    CHECK(is_convex_ccw(part.vertices()));
    sum += oracle::shoelace(part.vertices());
  }
  const double a = std::abs(oracle::shoelace(outline));
  CHECK(std::abs(sum - a) <= 1e-9 * a);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      CHECK(overlap_area(parts[i].vertices(), parts[j].vertices()) <= overlap_tol);
    }
  }
  CHECK(parts.size() <= outline.size() - 2);
}

}  // namespace

TEST_CASE("convex input returns itself", "[decompose]") {
  const Polygon pentagon{{0, 0}, {2, 0}, {3, 1.5}, {1, 3}, {-1, 1.5}};
  const auto parts = decompose(pentagon);
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].vertices() == pentagon);
}

TEST_CASE("L-shape splits into convex parts of total area 3", "[decompose]") {
  const Polygon L{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  const auto parts = decompose(L);
  CHECK(parts.size() >= 2);
  check_partition(L, parts, 0.0);
  double sum = 0.0;
  for (const auto& p : parts) sum += p.area();
  CHECK(sum == Approx(3.0));
}

TEST_CASE("arrow piece from the partition figure", "[decompose]") {
  SECTION("library decomposition") {
    const Piece p = normalize_piece("arrow", kArrowOutline);
    check_partition(p.outline, p.parts, 1e-12);
    CHECK(p.parts.size() <= 8);
  }
  SECTION("the figure's own partition is accepted as supplied parts") {
    const Piece p = normalize_piece("arrow", kArrowOutline, kArrowParts);
    REQUIRE(p.parts.size() == 5);
    double sum = 0.0;
    for (const auto& part : p.parts) sum += part.area();
    CHECK(sum == Approx(area(p.outline)).epsilon(1e-9));
  }
  SECTION("supplied parts that do not cover the outline are rejected") {
    auto partial = kArrowParts;
    partial.pop_back();
    CHECK_THROWS_AS(normalize_piece("arrow", kArrowOutline, partial), Error);
  }
}

TEST_CASE("decomposition of random simple polygons", "[decompose][property]") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> nv(3, 20);
  for (int trial = 0; trial < 500; ++trial) {
    const Polygon poly = oracle::random_star_polygon(rng, nv(rng));
    const auto parts = decompose(poly);
    check_partition(poly, parts, 1e-12);
  }
}

TEST_CASE("decompose rejects invalid input", "[decompose]") {
  CHECK_THROWS_AS(decompose(Polygon{{0, 0}, {1, 0}}), Error);
  const Polygon bowtie{{0, 0}, {2, 2}, {2, 0}, {0, 2}};
  try {
    decompose(bowtie);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SelfIntersecting);
  }
}
