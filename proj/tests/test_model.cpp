#include <algorithm>
#include <cmath>
#include <random>

#include "catch_amalgamated.hpp"
#include "nestline/errors.hpp"
#include "nestline/model.hpp"
#include "nestline/seeding.hpp"
#include "support/fixtures.hpp"
#include "support/gradient_check.hpp"
#include "support/oracles.hpp"

using namespace nestline;
using Catch::Approx;

namespace {

// Brute force: every part pair across distinct pieces, counted both ways.
std::int64_t brute_force_pairs(const std::vector<int>& parts) {
  std::vector<int> owner;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (int j = 0; j < parts[i]; ++j) owner.push_back(static_cast<int>(i));
  }
  std::int64_t ordered = 0;
  for (std::size_t a = 0; a < owner.size(); ++a) {
    for (std::size_t b = 0; b < owner.size(); ++b) {
      if (owner[a] != owner[b]) ++ordered;
    }
  }
  return ordered / 2;
}

std::vector<Piece> counted_pieces(const std::vector<int>& parts) {
  std::vector<Piece> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out.push_back(fixture::counted_piece("p" + std::to_string(i), parts[i]));
  }
  return out;
}

}  // namespace

TEST_CASE("enumerate_pairs matches the closed form", "[model]") {
  SECTION("two convex pieces need one line") {
    const auto pieces = counted_pieces({1, 1});
    CHECK(enumerate_pairs(pieces).size() == 1);
  }
  SECTION("parts (2, 1, 3)") {
    const std::vector<int> parts{2, 1, 3};
    const auto pairs = enumerate_pairs(counted_pieces(parts));
    CHECK(pairs.size() == 11);
    CHECK(pair_count_formula(parts) == 11);
    CHECK(brute_force_pairs(parts) == 11);
    CHECK(std::is_sorted(pairs.begin(), pairs.end()));
    for (const auto& p : pairs) CHECK(p.piece_i < p.piece_r);
  }
  SECTION("random part counts") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> n(1, 12), p(1, 6);
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<int> parts(static_cast<std::size_t>(n(rng)));
      for (int& x : parts) x = p(rng);
      const auto q = static_cast<std::int64_t>(enumerate_pairs(counted_pieces(parts)).size());
      REQUIRE(q == brute_force_pairs(parts));
      REQUIRE(q == pair_count_formula(parts));
    }
  }
}

TEST_CASE("variable counts", "[model]") {
  SECTION("two convex quadrilaterals give 10 variables") {
    const auto problem = build_problem(2.0, fixture::unit_squares(2));
    CHECK(problem.dimension() == 10);
  }
  SECTION("poly1a gives 712 variables") {
    const auto pieces = expand_pieces(fixture::load("poly1a"));
    const auto problem = build_problem(40.0, pieces);
    CHECK(problem.piece_count() == 15);
    CHECK(problem.line_count() == 222);
    CHECK(problem.dimension() == 712);
  }
  SECTION("empty instance") {
    CHECK_THROWS_AS(build_problem(1.0, {}), Error);
  }
}

TEST_CASE("placed_vertex values and derivatives", "[model]") {
  const auto a = placed_vertex({1, 0}, {2, 3, 0});
  CHECK(a.x == 3.0);
  CHECK(a.y == 3.0);
  CHECK(a.dx_dtheta == 0.0);
  CHECK(a.dy_dtheta == 1.0);
  const auto b = placed_vertex({0, 1}, {0, 0, oracle::kPi / 2});
  CHECK(b.x == Approx(-1.0));
  CHECK(b.y == Approx(0.0).margin(1e-15));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  const double h = 1e-6;
  for (int k = 0; k < 1000; ++k) {
    const Point v{u(rng), u(rng)};
    const Placement pl{u(rng), u(rng), u(rng)};
    const auto pv = placed_vertex(v, pl);
    const auto plus = placed_vertex(v, {pl.tx, pl.ty, pl.theta + h});
    const auto minus = placed_vertex(v, {pl.tx, pl.ty, pl.theta - h});
    CHECK(oracle::rel_error(pv.dx_dtheta, (plus.x - minus.x) / (2 * h)) <= 1e-5);
    CHECK(oracle::rel_error(pv.dy_dtheta, (plus.y - minus.y) / (2 * h)) <= 1e-5);
  }
}

TEST_CASE("separation residual", "[model]") {
  const SeparationLineVar line{0, 0, 0};
  CHECK(separation_residual({0, -1}, {}, line, LineSide::Left).value == Approx(-1.0));
  CHECK(separation_residual({0, -1}, {}, line, LineSide::Right).value == Approx(1.0));
  CHECK(separation_residual({3, 0}, {}, line, LineSide::Left).value == 0.0);

  SECTION("agrees with the slope-intercept form") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-10.0, 10.0), ang(-3.0, 3.0);
    int compared = 0;
    for (int k = 0; k < 1000; ++k) {
      const Point v{u(rng), u(rng)};
      const Placement pl{u(rng), u(rng), ang(rng)};
      const SeparationLineVar ln{u(rng), u(rng), ang(rng)};
      // Template edge of the line before rotation, at angle beta.
      const double beta = ang(rng);
      const double ex = std::cos(beta), ey = std::sin(beta);
      const double alpha = ln.alpha - beta;  // rotation applied to the template edge
      const double den = ex * std::cos(alpha) - ey * std::sin(alpha);
      if (std::abs(den) < 1e-3) continue;
      const double c = (ex * std::sin(alpha) + ey * std::cos(alpha)) / den;
      const double d = ln.y_bar - c * ln.x_bar;
      const Point q = transform_vertex(v, pl);
      const double fraction = q.y - c * q.x - d;
      const double r = separation_residual(v, pl, ln, LineSide::Left).value;
      CHECK(r == Approx(fraction * std::cos(ln.alpha)).margin(1e-9));
      if (std::cos(ln.alpha) > 1e-3 && std::abs(fraction) > 1e-9) {
        CHECK((r > 0) == (fraction > 0));
      }
      CHECK(std::abs(r) == Approx(std::abs(fraction) * std::abs(std::cos(ln.alpha))).margin(1e-9));
      ++compared;
    }
    CHECK(compared > 900);
  }
}

TEST_CASE("analytic gradients match finite differences", "[model][gradient]") {
  std::mt19937_64 rng(12);
  SECTION("two unit squares") {
    const auto st = gradcheck::run(build_problem(1.0, fixture::unit_squares(2)), 1, 200);
    CHECK(st.worst() <= 1e-5);
  }
  SECTION("non-convex random pieces") {
    const auto st = gradcheck::run(build_problem(6.0, fixture::random_star_pieces(rng, 4)), 2, 200);
    CHECK(st.worst() <= 1e-5);
  }
}

TEST_CASE("perturbing a piece changes only its constraints", "[model][property]") {
  std::mt19937_64 rng(21);
  const auto problem = build_problem(6.0, fixture::random_star_pieces(rng, 4));
  const auto v = fixture::random_point(problem, rng);
  std::vector<double> g0(problem.constraint_count()), g1(problem.constraint_count());
  problem.constraints(v, g0);
  for (std::size_t i = 0; i < problem.piece_count(); ++i) {
    for (int k = 0; k < 3; ++k) {
      auto w = v;
      w[NlpProblem::piece_offset(i) + static_cast<std::size_t>(k)] += 0.1;
      problem.constraints(w, g1);
      for (std::size_t c = 0; c < g0.size(); ++c) {
        const auto owners = problem.pieces_of(c);
        const bool involved = std::find(owners.begin(), owners.end(), static_cast<int>(i)) != owners.end();
        if (!involved) REQUIRE(g0[c] == g1[c]);
      }
    }
  }
}

TEST_CASE("check_feasibility", "[model]") {
  const auto pieces = fixture::unit_squares(2);
  const auto problem = build_problem(1.0, pieces);
  SECTION("side by side squares with a line between them") {
    const std::vector<Placement> pl{{0, 0, 0}, {1, 0, 0}};
    const auto lines = init_lines(pl, pieces, problem.pairs());
    const auto rep = check_feasibility(problem.encode(2.0, pl, lines), problem);
    CHECK(rep.max_violation <= 1e-12);
    CHECK(rep.containment_y == Approx(0.0).margin(1e-15));  // vertices at y = e
    CHECK(rep.max_overlap_area == 0.0);
  }
  SECTION("overlapping squares") {
    const std::vector<Placement> pl{{0, 0, 0}, {0.5, 0, 0}};
    const std::vector<SeparationLineVar> lines{{0.75, 0, oracle::kPi / 2}};
    const auto rep = check_feasibility(problem.encode(2.0, pl, lines), problem);
    CHECK(rep.separation > 0.0);
    CHECK(rep.max_overlap_area > 0.0);
    REQUIRE(rep.worst_pair);
    CHECK(rep.worst_pair->first == "sq0");
  }
  SECTION("wrong dimension") {
    std::vector<double> v(3, 0.0);
    CHECK_THROWS_AS(check_feasibility(v, problem), Error);
  }
}

TEST_CASE("small separation residuals bound the overlap", "[model][property]") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ang(-3.1, 3.1), tau_d(1e-6, 1e-2);
  for (int k = 0; k < 500; ++k) {
    const Polygon a = oracle::random_convex_polygon(rng, 6, 0, 0, 1.0);
    const Polygon b = oracle::random_convex_polygon(rng, 6, 0, 0, 1.0);
    const double alpha = ang(rng), tau = tau_d(rng);
    const Point n{-std::sin(alpha), std::cos(alpha)};  // normal: residual = dot(n, p - anchor)
    // Push a onto the non-positive side and b onto the non-negative side, each
    // allowed to cross the line by tau.
    double max_a = -1e300, min_b = 1e300;
    for (const Point& p : a) max_a = std::max(max_a, dot(n, p));
    for (const Point& p : b) min_b = std::min(min_b, dot(n, p));
    Polygon ap, bp;
    for (const Point& p : a) ap.push_back(p + (tau - max_a) * n);
    for (const Point& p : b) bp.push_back(p + (-tau - min_b) * n);
    const double diam = std::max(diameter(ap), diameter(bp));
    CHECK(overlap_area(ap, bp) <= 2.0 * tau * diam + 1e-15);
    // At tau = 0 the overlap vanishes.
    Polygon a0, b0;
    for (const Point& p : a) a0.push_back(p + (-max_a) * n);
    for (const Point& p : b) b0.push_back(p + (-min_b) * n);
    CHECK(overlap_area(a0, b0) <= 1e-12);
  }
}
