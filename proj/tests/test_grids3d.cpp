#include <set>

#include "doctest.h"
#include "qc/analysis.hpp"
#include "qc/grids3d.hpp"

using namespace qc;

namespace {
const GoldenNum t = GoldenNum::tau();

bool orthogonal(const Mat3& m) { return m * m.transpose() == Mat3::Identity(); }
GoldenNum det(const Mat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

CellSet fig_at(int extent) {
  TetragridOptions o;
  o.extent = extent;
  return fibonacci_icosagrid(fig_default_law(), o);
}
}  // namespace

TEST_CASE("levels and points") {
  Vec3 x(GoldenNum::frac(1, 2), t, -3);
  auto c = levels_of(x);
  CHECK(c[0] + c[1] + c[2] + c[3] == GoldenNum(0));
  CHECK(point_from_levels(c[0], c[1], c[2]) == x);
  for (auto& n : tetra_normals()) CHECK(squared_norm(n) == GoldenNum(3));
}

TEST_CASE("golden rotation") {
  auto g = golden_rotation();
  // cos theta = (3 tau - 1) / 4
  CHECK(g.cos_theta == GoldenNum(mpq_class(-1, 4), mpq_class(3, 4)));
  CHECK(g.degrees == doctest::Approx(15.5225).epsilon(1e-5));
  CHECK(orthogonal(g.matrix));
  CHECK(det(g.matrix) == GoldenNum(1));
  CHECK(g.matrix * g.axis == g.axis);
  CHECK(golden_rotation_about(g.axis, -1) == g.matrix.transpose());
  CHECK_THROWS_AS(golden_rotation_about(Vec3(1, 0, 0)), Error);
}

TEST_CASE("composition frames") {
  auto f = composition_frames();
  CHECK(f[0] == Mat3::Identity());
  for (int k = 1; k < 5; ++k) {
    CHECK(orthogonal(f[k]));
    CHECK(det(f[k]) == GoldenNum(-1));
    // the twist axis is reversed by the reflection
    CHECK(f[k] * tetra_normals()[k - 1] == -tetra_normals()[k - 1]);
  }
  auto fd = composition_frames_at(std::acos(golden_rotation().cos_theta.to_double()));
  for (int k = 0; k < 5; ++k) CHECK((fd[k] - to_double(f[k])).norm() < 1e-12);
}

TEST_CASE("icosahedral rotation group") {
  auto r = icosahedral_rotations();
  CHECK(r.size() == 60);
  std::set<Mat3, bool (*)(const Mat3&, const Mat3&)> s([](const Mat3& a, const Mat3& b) {
    return lex_cmp(Eigen::Map<const GMat<9>>(a.data()), Eigen::Map<const GMat<9>>(b.data())) < 0;
  });
  for (auto& m : r) s.insert(m);
  CHECK(s.size() == 60);
  for (std::size_t i = 0; i < r.size(); i += 7)
    for (std::size_t j = 0; j < r.size(); j += 11) CHECK(s.count(r[i] * r[j]) == 1);
  Mat3 f = fivefold_rotation(), p = Mat3::Identity();
  for (int i = 0; i < 5; ++i) p = p * f;
  CHECK(p == Mat3::Identity());
  CHECK(f * fivefold_axis() == fivefold_axis());
  CHECK(fivefold_axis() == Vec3(0, t, 1));
  CHECK(icosagrid_normals().size() == 10);
}

TEST_CASE("golden composition is the 20G") {
  auto star = origin_star();
  CHECK(star.cells.size() == 4);
  CHECK(star.points.size() == 13);
  auto g = golden_composition(star);
  CHECK(g.cells.size() == 20);
  CHECK(g.points.size() == 61);
  CHECK(plane_class_count(g) == 10);
  for (auto& c : g.cells) CHECK(is_regular(c));
  auto z = find_20g(g);
  REQUIRE(z.size() == 1);
  CHECK(z[0].center.isZero());
}

TEST_CASE("evenly distributed cluster") {
  auto e = evenly_distributed_cluster();
  CHECK(e.cells.size() == 20);
  CHECK(plane_class_count(e) == 70);
}

TEST_CASE("tetragrid cells") {
  TetragridOptions o;
  o.extent = 2;
  auto tp = tetragrid_cells(SpacingLaw::periodic(), o);
  CHECK(tp.cells.size() == 160);
  CHECK(tp.points.size() == 135);
  auto tf = tetragrid_cells(fig_default_law(), o);
  CHECK(tf.cells.size() == 280);
  CHECK(tf.points.size() == 313);
  std::map<GoldenNum, int> sizes;
  int down = 0;
  for (auto& c : tf.cells) {
    CHECK(is_regular(c));
    ++sizes[c.size];
    down += c.orientation == Orientation::down;
  }
  CHECK(down == 140);
  CHECK(sizes[t] == 152);
  CHECK(sizes[t * t] == 128);
  CHECK(default_cell_sizes(fig_default_law()) == std::vector<GoldenNum>{t, t * t});
  CHECK(window_radius(fig_default_law(), 2) == 2 * t);
  o.extent = 0;
  CHECK_THROWS_AS(tetragrid_cells(SpacingLaw::periodic(), o), Error);
}

TEST_CASE("cell faces lie on grid planes") {
  TetragridOptions o;
  o.extent = 2;
  auto law = fig_default_law();
  for (auto& c : tetragrid_cells(law, o).cells)
    for (int i = 0; i < 4; ++i) CHECK(law.contains(levels_of(c.v[(i + 1) % 4])[i]));
}

TEST_CASE("Fibonacci icosagrid at extent 3") {
  auto f = fig_at(3);
  CHECK(f.cells.size() == 5160);
  CHECK(f.points.size() == 4071);
  CHECK(f.provenance.window_r2 == GoldenNum(9, 9));
  CHECK(plane_class_count(f) == 10);
  CHECK(dirichlet_scale(f.points) == 4);
  auto z = find_20g(f);
  CHECK(z.size() == 4);
  auto [l, r] = chirality_split(f);
  CHECK(l.cells.size() == 2580);
  CHECK(r.cells.size() == 2580);
  CHECK(l.points.size() == 3411);
  CHECK(r.points.size() == 3411);
  CHECK(l.points != r.points);
}

TEST_CASE("periodic icosagrid") {
  auto ic = icosagrid(2);
  CHECK(ic.cells.size() == 800);
  CHECK(ic.points.size() == 651);
}

TEST_CASE("FIG at extent 4 has 64 20Gs and fivefold symmetry") {
  auto f = fig_at(4);
  CHECK(f.cells.size() == 13960);
  CHECK(f.points.size() == 10773);
  auto z = find_20g(f);
  CHECK(z.size() == 64);
  int central = 0;
  for (auto& g : z) central += g.center.isZero();
  CHECK(central == 4);
  Mat3 r = fivefold_rotation();
  std::set<Vec3, LexLess<Vec3>> pts(f.points.begin(), f.points.end());
  for (auto& p : f.points) CHECK(pts.count(r * p) == 1);
}
