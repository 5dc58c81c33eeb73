#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qc/error.hpp"
#include "qc/golden.hpp"
#include "qc/grids3d.hpp"

namespace qc {

struct AlignmentReport {
  GoldenNum scale = 1;  // inner is mapped by x -> scale * rotation * x
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Constant(GoldenNum(0));
  GoldenNum window_r2;  // common window used, in outer coordinates
  long matched = 0;
  long unmatched_count = 0;
  std::vector<Vec3> unmatched;  // witnesses, truncated
  bool subset = false;
  std::string verdict() const { return subset ? "subset" : "not_subset"; }
};

/// Anchor both sets at their central 20G, then test exact containment on the
/// common window shrunk by one cell.
AlignmentReport align_and_subset_check(const CellSet& inner, const CellSet& outer, std::size_t max_witnesses = 32);

/// feasible beta interval [lo, hi) of alpha = 0, T = 1 Fibonacci levels containing all values
std::pair<GoldenNum, GoldenNum> beta_interval(const std::vector<GoldenNum>& levels);

/// complete every copy's plane families into a Fibonacci tetragrid and regenerate cells
CellSet enrich(const CellSet& cqc);

struct SweepPoint {
  double angle = 0;  // radians
  double metric = 0;
};
/// angles evenly from 0 to the golden rotation, inclusive
std::vector<SweepPoint> convergence_sweep(int angle_steps, int extent = 4);

/// points of a within radius^2 r2 of the origin
std::vector<Vec3> points_within(const CellSet& a, const GoldenNum& r2);

}  // namespace qc
