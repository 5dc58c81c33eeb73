#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qc/golden.hpp"
#include "qc/grids3d.hpp"

namespace qc {

/// |sum_j exp(i k.x_j)|^2 on a square k-grid in the plane orthogonal to axis.
/// k_i = (i - resolution/2) * extent / (resolution/2); sample resolution/2 is k = 0.
struct DiffractionImage {
  double extent = 0;
  int resolution = 0;
  std::string axis_label;
  Eigen::Vector3d axis, u, v;  // k = k_u u + k_v v
  std::vector<double> intensity;  // row-major, row = v index
  std::size_t n_points = 0;

  double k_at(int i) const { return (i - resolution / 2) * extent / (resolution / 2); }
  double at(int iu, int iv) const { return intensity[static_cast<std::size_t>(iv) * resolution + iu]; }
  /// intensity / N^2
  std::vector<double> normalized() const;
};

/// u, v basis of the plane orthogonal to axis (deterministic)
std::pair<Eigen::Vector3d, Eigen::Vector3d> plane_basis(const Eigen::Vector3d& axis);

DiffractionImage diffraction_image(const std::vector<Eigen::Vector3d>& pts, const Eigen::Vector3d& axis, double extent,
                                   int resolution, const std::string& label = "");
/// same grid with the in-plane basis rotated by angle about the axis
DiffractionImage diffraction_image_rotated(const std::vector<Eigen::Vector3d>& pts, const Eigen::Vector3d& axis,
                                           double extent, int resolution, double angle);
/// sqrt(sum (I - I')^2 / sum I^2) over the annulus k_min <= |k| <= extent
double relative_rms(const DiffractionImage& a, const DiffractionImage& b, double k_min = 0);
/// 4.4934 / max|x|: the forward peak of the sample lies inside this radius
double forward_peak_radius(const std::vector<Eigen::Vector3d>& pts);
/// relative_rms between the image and its rotation by angle, forward peak excluded
double rotation_rms(const std::vector<Eigen::Vector3d>& pts, const Eigen::Vector3d& axis, double extent,
                    int resolution, double angle);

std::vector<Eigen::Vector3d> float_points(const std::vector<Vec3>& pts);
/// points with |x|^2 <= r2
std::vector<Vec3> ball(const std::vector<Vec3>& pts, const GoldenNum& r2);

struct VertexConfig {
  Vec3 center;
  int degree = 0;
  std::vector<int> star;  // canonical sorted direction indices
};

struct VertexCensus {
  GoldenNum edge2;                   // unit edge squared length
  std::vector<Vec3> directions;      // directed unit-edge vectors, lexicographic
  int direction_classes = 0;         // up to sign
  int symmetry_order = 0;            // rotations preserving the direction set
  std::vector<VertexConfig> vertices;
  std::map<std::vector<int>, long> census;
  int min_degree = 0, max_degree = 0;
};

VertexCensus vertex_configurations(const CellSet& cells);

struct EdgeCrossing {
  Vec3 point;
  GoldenNum p, q;  // point = A + p (B - A) = C + q (D - C), endpoints lexicographic
  std::array<int, 2> edges;
};

struct CrossingCatalog {
  std::vector<std::array<Vec3, 2>> edges;
  std::vector<EdgeCrossing> crossings;
  std::map<std::pair<GoldenNum, GoldenNum>, long> census;  // key (min, max) of p, q
};

/// p, q of two segments if they cross at a point interior to both
std::optional<std::pair<GoldenNum, GoldenNum>> segment_crossing(const Vec3& a, const Vec3& b, const Vec3& c,
                                                                 const Vec3& d);
CrossingCatalog edge_crossing_catalog(const CellSet& cells);

/// centroids, deduplicated and sorted
std::vector<Vec3> tetra_center_points(const CellSet& cells);

/// smallest k in 1..max_scale with k x a Dirichlet integer for every coordinate, else 0
int dirichlet_scale(const std::vector<Vec3>& pts, int max_scale = 64);

}  // namespace qc
