#include <cmath>

#include "doctest.h"
#include "qc/multigrid.hpp"

using namespace qc;

namespace {
const GoldenNum t = GoldenNum::tau();

std::array<GoldenNum, 5> default_offsets() {
  return {GoldenNum::frac(1, 5), GoldenNum::frac(-17, 100), GoldenNum::frac(31, 100), GoldenNum::frac(-2, 25),
          GoldenNum::frac(11, 100)};
}

Box2 square(long h) { return {-GoldenNum(h), GoldenNum(h), -GoldenNum(h), GoldenNum(h)}; }
}  // namespace

TEST_CASE("periodic offsets") {
  auto law = SpacingLaw::periodic(t, GoldenNum::frac(1, 3));
  CHECK(law.offset(0) == t / 3);
  CHECK(law.offset(-2) == t * GoldenNum::frac(-5, 3));
  CHECK(law.short_gap() == law.long_gap());
  CHECK(law.index_at_or_below(GoldenNum(2)) == 0);
  CHECK(law.contains(law.offset(7)));
}

TEST_CASE("Fibonacci offsets follow N + floor(N / tau) / tau") {
  auto law = SpacingLaw::fibonacci();
  // 0, 1, 1 + tau, 2 + tau, 2 + 2 tau
  CHECK(law.offset(0) == GoldenNum(0));
  CHECK(law.offset(1) == GoldenNum(1));
  CHECK(law.offset(2) == GoldenNum(1, 1));
  CHECK(law.offset(3) == GoldenNum(2, 1));
  CHECK(law.offset(4) == GoldenNum(2, 2));
  CHECK(law.offset(-1) == GoldenNum(0, -1));
  CHECK(law.long_gap() / law.short_gap() == t);
  for (long n = -50; n <= 50; ++n) {
    CHECK(law.index_at_or_below(law.offset(n)) == n);
    CHECK(law.contains(law.offset(n)));
    CHECK_FALSE(law.contains(law.offset(n) + GoldenNum::frac(1, 2)));
  }
}

TEST_CASE("gap word and substitution word share all factors up to length 10") {
  auto law = SpacingLaw::fibonacci();
  std::string w = fibonacci_word(law, 1000), s = substitution_word(1000);
  CHECK(w.size() == 1000);
  CHECK(s.substr(0, 8) == "LSLLSLSL");
  for (std::size_t len = 1; len <= 10; ++len) {
    CHECK(factor_set(w, len) == factor_set(s, len));
    CHECK(factor_set(w, len).size() == len + 1);  // Sturmian complexity
  }
  CHECK(factor_set(w, 2).count("SS") == 0);
  CHECK(factor_set(w, 3).count("LLL") == 0);
}

TEST_CASE("phase shifts keep the factor set") {
  auto law = SpacingLaw::fibonacci(GoldenNum::frac(1, 3), GoldenNum::frac(2, 7));
  CHECK(factor_set(fibonacci_word(law, 1000), 10) == factor_set(substitution_word(1000), 10));
}

TEST_CASE("spacing validation") {
  CHECK_THROWS_AS(SpacingLaw::periodic(0).validate(), Error);
  auto l = SpacingLaw::fibonacci();
  l.mu = 2;
  CHECK_THROWS_AS(l.validate(), Error);
  CHECK_THROWS_AS(fibonacci_word(SpacingLaw::periodic(), 10), Error);
  CHECK_THROWS_AS(grid_offsets(l, 3, 1), Error);
}

TEST_CASE("multigrid normals") {
  auto n = multigrid_normals(5);
  REQUIRE(n.size() == 5);
  CHECK(n[1](0) == doctest::Approx(std::cos(2 * M_PI / 5)));
  CHECK(n[1](1) == doctest::Approx(std::sin(2 * M_PI / 5)));
  CHECK_THROWS_AS(multigrid_normals(1), Error);
}

TEST_CASE("exact frame matches the float normals") {
  for (int k : {3, 4, 5, 6, 10}) {
    ExactFrame f(k);
    auto n = multigrid_normals(k);
    for (int m = 0; m < k; ++m) {
      // normals are covectors: real y = s_m kappa
      CHECK(f.c[m].to_double() == doctest::Approx(n[m](0)));
      CHECK(f.s[m].to_double() * f.kappa == doctest::Approx(n[m](1)));
    }
  }
  CHECK_THROWS_AS(ExactFrame(7), Error);
}

TEST_CASE("Penrose tiling from the periodic pentagrid") {
  ExactFrame f(5);
  auto g = pentagrid(default_offsets(), false);
  auto xs = grid_intersections(f, g, square(6));
  auto til = dual_tiling(f, g, square(6));
  CHECK(xs.size() == 1160);
  CHECK(til.cells.size() == xs.size());
  REQUIRE(til.shapes.size() == 2);
  CHECK(til.shape_names[0] == "prolate");
  CHECK(til.shape_names[1] == "oblate");
  // |cos 72| and |cos 36|
  CHECK(til.shapes[0] == GoldenNum::sigma() / 2);
  CHECK(til.shapes[1] == t / 2);
  CHECK(til.components == 1);
  auto chk = check_tiling(til);
  CHECK(chk.overlapping_pairs == 0);
  CHECK(chk.bad_edges == 0);
  CHECK(chk.boundary_loops == 1);
  CHECK(chk.cell_area == chk.boundary_area);
  CHECK(chk.ok());
}

TEST_CASE("Fibonacci pentagrid dual is also a two-rhombus tiling") {
  ExactFrame f(5);
  auto g = pentagrid(default_offsets(), true);
  auto til = dual_tiling(f, g, square(6));
  CHECK(til.cells.size() == 610);
  CHECK(til.shapes.size() == 2);
  CHECK(check_tiling(til).ok());
}

TEST_CASE("every dual cell has unit edges along two normals") {
  ExactFrame f(5);
  auto g = pentagrid(default_offsets(), false);
  auto til = dual_tiling(f, g, square(3));
  for (auto& c : til.cells) {
    Vec2 e1 = c.loop[1] - c.loop[0], e2 = c.loop[2] - c.loop[1];
    auto len2 = [&](const Vec2& e) { return e(0) * e(0) + e(1) * e(1) / f.kappa2; };
    CHECK(len2(e1) == GoldenNum(1));
    CHECK(len2(e2) == GoldenNum(1));
  }
}

TEST_CASE("concurrent lines are reported") {
  ExactFrame f(5);
  std::array<GoldenNum, 5> zero{};
  CHECK_THROWS_AS(grid_intersections(f, pentagrid(zero, false), square(2)), Error);
}

TEST_CASE("square grid gives a single rhombus type") {
  ExactFrame f(4);
  std::vector<GridFamily> g(2);
  g[0].normal_index = 0;
  g[0].law = SpacingLaw::periodic(1, GoldenNum::frac(1, 2));
  g[1].normal_index = 1;
  g[1].law = SpacingLaw::periodic(1, GoldenNum::frac(1, 2));
  auto til = dual_tiling(f, g, square(3));
  CHECK(til.cells.size() == 36);
  CHECK(til.shapes.size() == 1);
  CHECK(check_tiling(til).ok());
}
