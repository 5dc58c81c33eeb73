#pragma once

#include <array>
#include <string>
#include <unordered_set>
#include <vector>

#include "qc/error.hpp"
#include "qc/golden.hpp"
#include "qc/grids3d.hpp"

namespace qc {

/// E8 vector stored as doubled coordinates (all even or all odd, sum = 0 mod 4)
using E8Vec = std::array<int, 8>;

struct E8Root {
  E8Vec twice;
  bool half_integer() const { return twice[0] % 2 != 0; }
};

std::vector<E8Root> e8_roots();
bool in_e8(const E8Vec& twice);
int e8_norm4(const E8Vec& twice);  // 4 |x|^2

using Icosian = Vec4;  // a + b i + c j + d k
Icosian qmul(const Icosian& p, const Icosian& q);
Icosian qconj(const Icosian& q);
GoldenNum quat_norm(const Icosian& q);
/// A + B for quat_norm = A + B sqrt5
GoldenNum euclid_norm(const Icosian& q);

/// the 120 unit icosians (600-cell vertices), lexicographic
const std::vector<Icosian>& unit_icosians();

/// q = p (tau a + H b) / tau with p = (1/2, 1/2, 0, 0); |x|^2 / 2 = euclid_norm(q)
Icosian e8_to_icosian(const E8Vec& twice);
/// inverse of e8_to_icosian; throws NotInRing
E8Vec icosian_to_e8(const Icosian& q);

/// the 4x4 block of the projection (entries in {-1/2, 1/2})
const Mat4& h_block();

enum class WindowKind { ball, voronoi_approx };

struct ProjectionSpec {
  GMat<8, 8> Pi;
  Mat4 H;
  WindowKind window = WindowKind::ball;
  GoldenNum radius = 1;  // ball radius; ignored by voronoi_approx

  /// squared window radius used for filtering
  GoldenNum window_r2() const;
};

ProjectionSpec projection_spec(WindowKind kind = WindowKind::ball, GoldenNum radius = 1);
/// rank by exact elimination
int exact_rank(GMat<8, 8> m);

/// Projected Voronoi cell volume of E8 in perpendicular space, 5 tau^3 / 6.
GoldenNum voronoi_window_volume();
/// ball radius of equal 4-volume, sqrt[4](2 V / pi^2)
double voronoi_ball_radius();

/// |x_perp|^2 for x = twice / 2
GoldenNum perp_norm2(const E8Vec& twice);

struct QC4 {
  std::vector<Icosian> points;  // lexicographic
  std::vector<E8Vec> lattice;   // preimages, same order
  GoldenNum shell2;             // |x|^2 bound of the search
  GoldenNum window_r2;
  GoldenNum complete_q2;  // every point with |q|^2 <= complete_q2 is present
  WindowKind window = WindowKind::ball;

  bool contains(const Icosian& q) const;
  void index();

 private:
  std::unordered_set<Icosian, VecHash<Icosian>, VecEq<Icosian>> set_;
};

QC4 elser_sloane_points(const ProjectionSpec& spec, const GoldenNum& shell_radius);

/// number of points tested and failures of q -> tau q
struct ClosureReport {
  int tested = 0;
  int failures = 0;
};
ClosureReport tau_closure(const QC4& qc, int samples, std::uint64_t seed);

struct Cell600 {
  Icosian center;
};
/// centers c (QC points) with c + u present for every unit icosian u
std::vector<Cell600> unit_600cells(const QC4& qc);
/// 600 facets of the unit 600-cell, vertex indices into unit_icosians()
const std::vector<std::array<int, 4>>& cell600_facets();
/// open interiors of translates at c1, c2 overlap
bool cells600_intersect(const Icosian& c1, const Icosian& c2);

enum class SectionKind { type1, type2, icosahedral };
std::string to_string(SectionKind k);
SectionKind parse_section_kind(const std::string& s);

struct SectionParams {
  Vec4 facet_normal;  // default -tau^2 (1,1,0,0)
  SectionParams();
};

struct CrossSection {
  SectionKind kind = SectionKind::type1;
  Vec4 normal;
  GoldenNum offset;        // normal . q on the slice
  CellSet cells;           // 3D: level frame of the tetragrid for type1/type2
  GoldenNum complete_r2;   // 3D ball radius^2 of guaranteed completeness
  GoldenNum unit_size;     // level size of a unit-edge cell
};

/// level coordinates of slice points (types I and II)
std::array<GoldenNum, 4> section_levels(const SectionParams& p, SectionKind kind, const Icosian& q);
CrossSection cross_section(const QC4& qc, SectionKind kind, const SectionParams& p = {});

/// 5 copies (type1) or 20 copies (type2); copies == 1 returns the section unchanged
CellSet compound_qc(const CrossSection& s, int copies = 0);

struct DihedralCheck {
  double cell600_dihedral_deg = 0;
  double golden_deg = 0;
  double acos_minus_quarter_deg = 0;
  bool golden_plus_60 = false;        // dihedral == golden + 60
  bool acos_quarter_plus_60 = false;  // dihedral == acos(-1/4) + 60
};
DihedralCheck dihedral_identities();

}  // namespace qc
