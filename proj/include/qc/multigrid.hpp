#pragma once

#include <Eigen/Core>
#include <array>
#include <set>
#include <string>
#include <vector>

#include "qc/error.hpp"
#include "qc/golden.hpp"

namespace qc {

struct SpacingLaw {
  enum class Kind { periodic, quasiperiodic };
  Kind kind = Kind::quasiperiodic;
  GoldenNum T = 1;
  GoldenNum gamma;  // periodic
  GoldenNum alpha, beta;
  GoldenNum rho = GoldenNum::tau(), mu = GoldenNum::tau();

  static SpacingLaw periodic(GoldenNum T = 1, GoldenNum gamma = 0);
  static SpacingLaw fibonacci(GoldenNum alpha = 0, GoldenNum beta = 0, GoldenNum T = 1);

  /// x_N: T(N + gamma), or T(N + (1/tau) floor(N/tau + beta) + alpha)
  GoldenNum offset(long n) const;
  /// gap values; periodic laws have S == L == T
  GoldenNum short_gap() const;
  GoldenNum long_gap() const;
  /// largest N with x_N <= x
  long index_at_or_below(const GoldenNum& x) const;
  bool contains(const GoldenNum& x) const;
  void validate() const;
};

std::vector<GoldenNum> grid_offsets(const SpacingLaw& law, long n_lo, long n_hi);

/// gap word x_{N+1}-x_N for N = 0..count-1
std::string fibonacci_word(const SpacingLaw& law, std::size_t count);
/// prefix of the fixed point of L->LS, S->L
std::string substitution_word(std::size_t count);
std::set<std::string> factor_set(const std::string& w, std::size_t len);

/// unit normals (cos 2 pi m/n, sin 2 pi m/n), floating point
std::vector<Eigen::Vector2d> multigrid_normals(int n_families);

/// Exact 2D frame for n in {3,4,5,6,10}: coordinates (X, Y) with Y = y * kappa,
/// kappa = sin(2pi/n). Normal m is (c_m, s_m) in this frame and the edge vector
/// dual to family m is (c_m, kappa^2 s_m).
struct ExactFrame {
  int n = 5;
  std::vector<GoldenNum> c, s;
  GoldenNum kappa2;
  double kappa = 0;

  explicit ExactFrame(int n_families);
  Vec2 normal(int m) const { return Vec2(c[m], s[m]); }
  Vec2 edge(int m) const { return Vec2(c[m], kappa2 * s[m]); }
  GoldenNum project(const Vec2& p, int m) const { return p(0) * c[m] + p(1) * s[m]; }
  Eigen::Vector2d to_real(const Vec2& p) const {
    return {p(0).to_double(), p(1).to_double() / kappa};
  }
};

struct GridFamily {
  int normal_index = 0;
  SpacingLaw law;
  long n_lo = -1000000, n_hi = 1000000;
};

struct Box2 {
  GoldenNum x0, x1, y0, y1;  // frame coordinates
  bool contains(const Vec2& p) const {
    return p(0) >= x0 && p(0) <= x1 && p(1) >= y0 && p(1) <= y1;
  }
};

struct Intersection {
  Vec2 point;
  std::array<int, 2> family;
  std::array<long, 2> line;
  int angle_class = 0;
};

struct RhombusCell {
  std::array<Vec2, 4> loop;  // counter-clockwise in the frame
  std::array<int, 2> family;
  std::array<long, 2> line;
  int shape = 0;  // index into Tiling::shapes
};

struct Adjacency {
  int a, b;
  int family;
  long line;
};

struct Tiling {
  std::vector<RhombusCell> cells;
  std::vector<Adjacency> adjacency;
  std::vector<GoldenNum> shapes;  // |cos| of the rhombus angle, one per shape
  std::vector<std::string> shape_names;
  int components = 0;
};

std::vector<Intersection> grid_intersections(const ExactFrame& frame, const std::vector<GridFamily>& grid,
                                             const Box2& patch);

/// Vertex of the dual cell per de Bruijn: sum_m K_m e_m, K_j = N_j + dj, K_k = N_k + dk.
Vec2 dual_vertex(const ExactFrame& frame, const std::vector<GridFamily>& grid, const Intersection& x, int dj, int dk);

Tiling dual_tiling(const ExactFrame& frame, const std::vector<GridFamily>& grid, const Box2& patch);

struct TilingCheck {
  long overlapping_pairs = 0;
  GoldenNum cell_area;      // frame units
  GoldenNum boundary_area;  // area enclosed by the boundary loop
  int boundary_loops = 0;
  long bad_edges = 0;  // edges used by more than two cells
  bool ok() const { return overlapping_pairs == 0 && bad_edges == 0 && boundary_loops == 1 && cell_area == boundary_area; }
};

TilingCheck check_tiling(const Tiling& t);

/// standard pentagrid with the given offsets
std::vector<GridFamily> pentagrid(const std::array<GoldenNum, 5>& offsets, bool fibonacci);

}  // namespace qc
