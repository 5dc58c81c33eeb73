#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qc/error.hpp"
#include "qc/golden.hpp"
#include "qc/multigrid.hpp"

namespace qc {

enum class Orientation { down, up };
enum class Chirality { left, right, both };

/// Regular tetrahedron of a tetragrid. Vertex i is opposite the face with normal v_i
/// of its grid; size s = sum of the face levels (down) or minus that (up).
struct TetraCell {
  std::array<Vec3, 4> v;
  Orientation orientation = Orientation::down;
  int grid_id = 0;
  Chirality chirality = Chirality::both;
  GoldenNum size;
};

struct Provenance {
  std::string kind;
  GoldenNum window_r2;  // ball window |x|^2 <= window_r2 about the origin
  std::map<std::string, std::string> params;
};

struct CellSet {
  std::vector<TetraCell> cells;
  std::vector<Vec3> points;  // deduplicated, lexicographic
  Provenance provenance;

  /// sort cells, rebuild points
  void finalize();
};

/// tetragrid normals (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1); |v|^2 = 3
const std::array<Vec3, 4>& tetra_normals();
/// point with v_i . x = c_i (needs c_1+..+c_4 = 0, c_4 is implied)
Vec3 point_from_levels(const GoldenNum& c1, const GoldenNum& c2, const GoldenNum& c3);
std::array<GoldenNum, 4> levels_of(const Vec3& x);

struct TetragridOptions {
  int extent = 3;  // ball window of radius extent * L
  std::vector<GoldenNum> sizes;  // empty: {T} periodic, {L, tau L} quasiperiodic
  bool down = true, up = true;
  std::optional<GoldenNum> window_r2;  // overrides the extent ball
};

GoldenNum window_radius(const SpacingLaw& law, int extent);
std::vector<GoldenNum> default_cell_sizes(const SpacingLaw& law);

/// Cells with faces on grid planes (one per family) and size in opts.sizes,
/// all four vertices inside the window.
CellSet tetragrid_cells(const SpacingLaw& law, const TetragridOptions& opts);

/// 10 sign-canonical threefold axes (dodecahedron vertex directions), |v|^2 = 3
std::vector<Vec3> icosagrid_normals();

struct GoldenRotation {
  Vec3 axis;  // |axis|^2 = 3
  GoldenNum cos_theta;
  Mat3 matrix;
  double degrees = 0;
};
GoldenRotation golden_rotation();
/// rotation by the golden angle (sign +1 or -1) about an axis with |a|^2 = 3
Mat3 golden_rotation_about(const Vec3& axis, int sign = 1);
/// reflection through the plane normal to v
Mat3 reflection(const Vec3& v);

/// Frames of the five copies: identity and reflect-twist about each base normal.
std::array<Mat3, 5> composition_frames(int sign = 1);
/// float frames at an arbitrary twist angle (radians)
std::array<Eigen::Matrix3d, 5> composition_frames_at(double angle, int sign = 1);

CellSet transform(const CellSet& s, const Mat3& m, int grid_id);

/// the four same-orientation unit tetrahedra of a tetragrid sharing the origin
CellSet origin_star(const GoldenNum& size = 1, Orientation o = Orientation::down);
CellSet golden_composition(const CellSet& base, int sign = 1);

/// 20G tetrahedra each untwisted by the golden angle about its own axis
CellSet evenly_distributed_cluster();

CellSet icosagrid(int extent);  // periodic, gamma = 0
CellSet fibonacci_icosagrid(const SpacingLaw& law, const TetragridOptions& opts);
/// parameters the FIG uses by default: alpha = 0, beta = 1/2
SpacingLaw fig_default_law();

std::pair<CellSet, CellSet> chirality_split(const CellSet& cells);

struct PlaneClass {
  Vec3 normal;  // first nonzero component 1
  std::vector<GoldenNum> offsets;
};
std::vector<PlaneClass> plane_classes(const CellSet& cells);
std::size_t plane_class_count(const CellSet& cells);

struct TwentyGroup {
  Vec3 center;
  Orientation orientation;
  GoldenNum size;
};
/// points where all five grids carry a full 4-star of equal orientation and size
std::vector<TwentyGroup> find_20g(const CellSet& cells);

/// all edge squared lengths equal
bool is_regular(const TetraCell& c);
Vec3 centroid(const TetraCell& c);

/// 5-fold rotation about a face axis of the frame dodecahedron
Mat3 fivefold_rotation();
Vec3 fivefold_axis();
/// the 60 rotations of the chiral icosahedral group fixing the composition frames
std::vector<Mat3> icosahedral_rotations();

}  // namespace qc
