#include "qc/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_set>

#include "qc/parallel.hpp"

namespace qc {

namespace {

using PointSet3 = std::unordered_set<Vec3, VecHash<Vec3>, VecEq<Vec3>>;

GoldenNum rational_below(double x) {
  if (x <= 0) return GoldenNum(0);
  return GoldenNum(mpq_class(static_cast<long>(std::floor(x * 1e9)), 1000000000L));
}

GoldenNum max_cell_size(const CellSet& s) {
  GoldenNum m = 0;
  for (auto& c : s.cells)
    if (c.size > m) m = c.size;
  return m;
}

std::vector<TwentyGroup> central(const CellSet& s) {
  std::vector<TwentyGroup> r;
  for (auto& g : find_20g(s))
    if (g.center.isZero()) r.push_back(g);
  return r;
}

std::vector<Vec3> star_points(const CellSet& s, const TwentyGroup& g) {
  std::set<Vec3, LexLess<Vec3>> r;
  for (auto& c : s.cells)
    if (c.orientation == g.orientation && c.size == g.size &&
        std::any_of(c.v.begin(), c.v.end(), [&](const Vec3& p) { return p == g.center; }))
      for (auto& p : c.v) r.insert(p);
  return {r.begin(), r.end()};
}

}  // namespace

std::vector<Vec3> points_within(const CellSet& a, const GoldenNum& r2) {
  std::vector<Vec3> r;
  for (auto& p : a.points)
    if (squared_norm(p) <= r2) r.push_back(p);
  return r;
}

AlignmentReport align_and_subset_check(const CellSet& inner, const CellSet& outer, std::size_t max_witnesses) {
  if (inner.points.empty() || outer.points.empty()) throw Error("Empty", "point sets must be nonempty");
  auto gi = central(inner), go = central(outer);
  if (gi.empty()) throw Error("NoCentral20G", "inner set has no central 20G");
  if (go.empty()) throw Error("NoCentral20G", "outer set has no central 20G");

  // candidate anchors: equal orientation, scale 1 first, then smallest ratio
  struct Cand {
    GoldenNum scale;
    TwentyGroup a, b;
  };
  std::vector<Cand> cands;
  for (auto& a : gi)
    for (auto& b : go)
      if (a.orientation == b.orientation) cands.push_back({b.size / a.size, a, b});
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    bool xu = x.scale == GoldenNum(1), yu = y.scale == GoldenNum(1);
    if (xu != yu) return xu;
    return x.scale < y.scale;
  });
  if (cands.empty()) throw Error("NoCentral20G", "central 20Gs differ in orientation");

  AlignmentReport rep;
  bool anchored = false;
  std::vector<Mat3> rots = icosahedral_rotations();
  // identity first
  std::stable_partition(rots.begin(), rots.end(), [](const Mat3& m) { return m == Mat3::Identity(); });
  for (auto& c : cands) {
    auto si = star_points(inner, c.a), so = star_points(outer, c.b);
    PointSet3 target(so.begin(), so.end());
    for (int sg : {1, -1})
      for (auto& r : rots) {
        if (anchored) break;
        Mat3 m = GoldenNum(sg) * c.scale * r;
        if (std::all_of(si.begin(), si.end(), [&](const Vec3& p) { return target.count(m * p) > 0; })) {
          rep.scale = c.scale;
          rep.rotation = GoldenNum(sg) * r;
          anchored = true;
          break;
        }
      }
    if (anchored) break;
  }
  if (!anchored) throw Error("NoCentral20G", "central 20Gs cannot be matched by a similarity");

  double ri = std::sqrt(inner.provenance.window_r2.to_double()) * rep.scale.to_double();
  double ro = std::sqrt(outer.provenance.window_r2.to_double());
  // outer points near its rim may lack a containing cell
  double margin = max_cell_size(outer).to_double();
  double r = std::min(ri, ro) - margin;
  rep.window_r2 = rational_below(r * r);

  PointSet3 out(outer.points.begin(), outer.points.end());
  const Mat3 m = rep.scale * rep.rotation;
  std::vector<Vec3> mapped(inner.points.size());
  std::vector<char> in(inner.points.size()), ok(inner.points.size());
  parallel_for(inner.points.size(), [&](std::size_t i) {
    mapped[i] = m * inner.points[i] + rep.translation;
    in[i] = squared_norm(mapped[i]) <= rep.window_r2;
    ok[i] = in[i] && out.count(mapped[i]) > 0;
  });
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    if (!in[i]) continue;
    if (ok[i]) {
      ++rep.matched;
    } else {
      ++rep.unmatched_count;
      if (rep.unmatched.size() < max_witnesses) rep.unmatched.push_back(mapped[i]);
    }
  }
  rep.subset = rep.unmatched_count == 0;
  return rep;
}

std::pair<GoldenNum, GoldenNum> beta_interval(const std::vector<GoldenNum>& levels) {
  // x_N = N + sigma m, m = floor(N / tau + beta), so x = (N - m) + m tau
  GoldenNum lo, hi;
  bool first = true;
  for (auto& x : levels) {
    if (x.a().get_den() != 1 || x.b().get_den() != 1)
      throw Error("NotFibonacci", "level " + x.str() + " is not a Dirichlet integer");
    mpz_class m = x.b().get_num(), n = x.a().get_num() + m;
    GoldenNum nt = GoldenNum(mpq_class(n)) * GoldenNum::sigma();
    GoldenNum l = GoldenNum(mpq_class(m)) - nt, h = l + 1;
    if (first || l > lo) lo = l;
    if (first || h < hi) hi = h;
    first = false;
  }
  if (first) throw Error("MissingProvenance", "no levels to infer spacing from");
  if (!(lo < hi)) throw Error("NotFibonacci", "levels are not consistent with one Fibonacci spacing");
  return {lo, hi};
}

CellSet enrich(const CellSet& cqc) {
  if (cqc.cells.empty()) throw Error("MissingProvenance", "no cells to attribute to tetragrid frames");
  auto frames = composition_frames(1);
  // face i of a cell passes through every vertex but i
  std::array<std::set<GoldenNum>, 5> faces;
  for (auto& c : cqc.cells) {
    if (c.grid_id < 0 || c.grid_id > 4) throw Error("MissingProvenance", "cell grid id outside 0..4");
    Mat3 inv = frames[c.grid_id].transpose();
    for (int i = 0; i < 4; ++i) faces[c.grid_id].insert(levels_of(Vec3(inv * c.v[(i + 1) % 4]))[i]);
  }
  CellSet out;
  for (int k = 0; k < 5; ++k) {
    if (faces[k].empty()) throw Error("MissingProvenance", "copy " + std::to_string(k) + " has no cells");
    auto [lo, hi] = beta_interval({faces[k].begin(), faces[k].end()});
    GoldenNum beta = (lo + hi) / 2;
    TetragridOptions opts;
    opts.window_r2 = cqc.provenance.window_r2;
    CellSet base = tetragrid_cells(SpacingLaw::fibonacci(0, beta), opts);
    for (auto& c : base.cells) {
      TetraCell t = c;
      for (auto& p : t.v) p = frames[k] * p;
      t.grid_id = k;
      t.chirality = t.orientation == Orientation::down ? Chirality::left : Chirality::right;
      out.cells.push_back(std::move(t));
    }
    out.provenance.params["beta" + std::to_string(k)] = beta.str();
  }
  out.points = cqc.points;
  out.provenance.kind = cqc.provenance.kind;
  out.provenance.params["enriched"] = "1";
  out.provenance.window_r2 = cqc.provenance.window_r2;
  out.finalize();
  return out;
}

std::vector<SweepPoint> convergence_sweep(int angle_steps, int extent) {
  if (angle_steps < 2) throw Error("BadSteps", "angle_steps must be >= 2");
  TetragridOptions opts;
  opts.extent = extent;
  SpacingLaw law = fig_default_law();
  CellSet base = tetragrid_cells(law, opts);
  CellSet fig = fibonacci_icosagrid(law, opts);

  // outer 20Gs at the golden composition
  std::vector<TwentyGroup> outer;
  for (auto& g : find_20g(fig))
    if (!g.center.isZero()) outer.push_back(g);

  // 4-star centers of the base grid, by orientation and size
  struct Star {
    Eigen::Vector3d p;
    Orientation o;
    GoldenNum s;
  };
  struct Key {
    Vec3 p;
    int o;
    GoldenNum s;
    bool operator<(const Key& k) const {
      if (int c = lex_cmp(p, k.p)) return c < 0;
      if (o != k.o) return o < k.o;
      return s < k.s;
    }
  };
  std::map<Key, int> cnt;
  for (auto& c : base.cells)
    for (auto& p : c.v) ++cnt[{p, static_cast<int>(c.orientation), c.size}];
  std::vector<Star> stars;
  for (auto& [k, n] : cnt)
    if (n >= 4) stars.push_back({to_double(k.p), static_cast<Orientation>(k.o), k.s});
  const double golden = std::acos(golden_rotation().cos_theta.to_double());
  std::vector<SweepPoint> out(angle_steps);
  parallel_for(static_cast<std::size_t>(angle_steps), [&](std::size_t j) {
    double th = golden * static_cast<double>(j) / (angle_steps - 1);
    auto fr = composition_frames_at(th, 1);
    double metric = 0;
    for (auto& g : outer) {
      Eigen::Vector3d c = to_double(g.center);
      for (int k = 0; k < 5; ++k) {
        double best = std::numeric_limits<double>::infinity();
        for (auto& s : stars)
          if (s.o == g.orientation && s.s == g.size) best = std::min(best, (fr[k] * s.p - c).norm());
        metric += best;
      }
    }
    out[j] = {th, metric};
  });
  return out;
}

}  // namespace qc
