#include <set>

#include "doctest.h"
#include "qc/correspondence.hpp"
#include "qc/e8qc.hpp"

using namespace qc;

namespace {

struct Chain {
  CellSet fig, cqc1, cqc2;
  Chain() {
    TetragridOptions o;
    o.extent = 5;
    fig = fibonacci_icosagrid(fig_default_law(), o);
    auto qc = elser_sloane_points(projection_spec(), GoldenNum(5));
    cqc1 = compound_qc(cross_section(qc, SectionKind::type1));
    cqc2 = compound_qc(cross_section(qc, SectionKind::type2));
  }
};

const Chain& chain() {
  static const Chain c;
  return c;
}

}  // namespace

TEST_CASE("beta interval from Fibonacci levels") {
  for (auto beta : {GoldenNum(0), GoldenNum::frac(1, 2), GoldenNum::frac(3, 10)}) {
    auto law = SpacingLaw::fibonacci(0, beta);
    auto lv = grid_offsets(law, -40, 40);
    auto [lo, hi] = beta_interval(lv);
    CHECK(lo <= beta);
    CHECK(beta < hi);
    // regenerating with any beta in the interval reproduces the levels
    auto mid = (lo + hi) / 2;
    CHECK(grid_offsets(SpacingLaw::fibonacci(0, mid), -40, 40) == lv);
  }
  CHECK_THROWS_AS(beta_interval({}), Error);
  CHECK_THROWS_AS(beta_interval({GoldenNum::frac(1, 2)}), Error);
  // 0 and 1 + tau cannot both be levels of one spacing
  CHECK_THROWS_AS(beta_interval({GoldenNum(0), GoldenNum(1), GoldenNum(2)}), Error);
}

TEST_CASE("a set is a subset of itself under the identity") {
  auto& f = chain().fig;
  auto r = align_and_subset_check(f, f);
  CHECK(r.subset);
  CHECK(r.scale == GoldenNum(1));
  CHECK(r.rotation == Mat3::Identity());
  CHECK(r.unmatched_count == 0);
}

TEST_CASE("CQC-I is a subset of the FIG") {
  auto r = align_and_subset_check(chain().cqc1, chain().fig);
  CHECK(r.verdict() == "subset");
  CHECK(r.matched == 571);
  CHECK(r.unmatched.empty());
  CHECK(r.scale == GoldenNum(1));
  CHECK(r.rotation == Mat3::Identity());
}

TEST_CASE("CQC-II is a subset of CQC-I and of the FIG") {
  auto a = align_and_subset_check(chain().cqc2, chain().cqc1);
  CHECK(a.subset);
  CHECK(a.matched == 391);
  CHECK(a.unmatched.empty());
  auto b = align_and_subset_check(chain().cqc2, chain().fig);
  CHECK(b.subset);
  CHECK(b.unmatched.empty());
}

TEST_CASE("the FIG is not a subset of CQC-I") {
  auto& c = chain();
  auto r = align_and_subset_check(c.fig, c.cqc1, 10);
  CHECK(r.verdict() == "not_subset");
  CHECK(r.matched == 571);
  CHECK(r.unmatched_count == 4880);
  REQUIRE(r.unmatched.size() == 10);
  std::set<Vec3, LexLess<Vec3>> in(c.cqc1.points.begin(), c.cqc1.points.end());
  for (auto& w : r.unmatched) {
    CHECK(in.count(w) == 0);
    CHECK(squared_norm(w) <= r.window_r2);
  }
}

TEST_CASE("enrich completes CQC-I to the FIG") {
  auto& c = chain();
  CellSet e = enrich(c.cqc1);
  for (int k = 0; k < 5; ++k) CHECK(e.provenance.params.at("beta" + std::to_string(k)) == GoldenNum::frac(1, 2).str());
  TetragridOptions o;
  o.window_r2 = c.cqc1.provenance.window_r2;
  CellSet f = fibonacci_icosagrid(fig_default_law(), o);
  CHECK(e.points == f.points);
  CHECK(e.cells.size() == f.cells.size());
  CHECK(enrich(e).points == e.points);
  // the FIG is already complete
  CHECK(enrich(f).points == f.points);
}

TEST_CASE("enrich needs grid provenance") {
  CHECK_THROWS_AS(enrich(CellSet{}), Error);
  CellSet one = origin_star();
  CHECK_THROWS_AS(enrich(one), Error);  // copies 1..4 have no cells
}

TEST_CASE("convergence sweep is minimized at the golden angle") {
  auto s = convergence_sweep(64);
  REQUIRE(s.size() == 64);
  CHECK(s.front().angle == 0);
  CHECK(s.back().angle == doctest::Approx(std::acos(golden_rotation().cos_theta.to_double())));
  CHECK(s.back().metric <= 1e-9);
  CHECK(s.front().metric == doctest::Approx(159.395).epsilon(1e-4));
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i].metric < s[i - 1].metric);
  CHECK_THROWS_AS(convergence_sweep(1), Error);
}

TEST_CASE("points_within") {
  auto p = points_within(chain().fig, GoldenNum(1));
  CHECK(p.size() == 1);
  CHECK(p[0].isZero());
}
