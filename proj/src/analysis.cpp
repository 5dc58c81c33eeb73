#include "qc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "qc/parallel.hpp"

namespace qc {

// ---------------------------------------------------------------- diffraction

std::pair<Eigen::Vector3d, Eigen::Vector3d> plane_basis(const Eigen::Vector3d& axis) {
  Eigen::Vector3d a = axis.normalized();
  int best = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(a(i)) < std::abs(a(best)) - 1e-12) best = i;
  Eigen::Vector3d e = Eigen::Vector3d::Unit(best);
  Eigen::Vector3d u = (e - e.dot(a) * a).normalized();
  return {u, a.cross(u)};
}

std::vector<double> DiffractionImage::normalized() const {
  std::vector<double> r(intensity);
  double n2 = static_cast<double>(n_points) * static_cast<double>(n_points);
  for (auto& x : r) x /= n2;
  return r;
}

namespace {

DiffractionImage compute(const std::vector<Eigen::Vector3d>& pts, const Eigen::Vector3d& axis,
                         const Eigen::Vector3d& u, const Eigen::Vector3d& v, double extent, int res,
                         const std::string& label) {
  if (pts.empty()) throw Error("Empty", "diffraction needs points");
  if (res < 16 || res % 2) throw Error("BadResolution", "resolution must be even and >= 16");
  DiffractionImage img;
  img.extent = extent;
  img.resolution = res;
  img.axis_label = label;
  img.axis = axis.normalized();
  img.u = u;
  img.v = v;
  img.n_points = pts.size();
  const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
  using CMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  CMat ea(res, n), eb(res, n);
  parallel_for(static_cast<std::size_t>(res), [&](std::size_t i) {
    double k = img.k_at(static_cast<int>(i));
    for (Eigen::Index p = 0; p < n; ++p) {
      ea(i, p) = std::polar(1.0, k * u.dot(pts[p]));
      eb(i, p) = std::polar(1.0, k * v.dot(pts[p]));
    }
  });
  img.intensity.assign(static_cast<std::size_t>(res) * res, 0.0);
  // fixed row blocks keep the arithmetic independent of the worker count
  const int block = 8;
  const int nblocks = (res + block - 1) / block;
  parallel_for(static_cast<std::size_t>(nblocks), [&](std::size_t b) {
    int r0 = static_cast<int>(b) * block, rows = std::min(block, res - r0);
    CMat f = ea.middleRows(r0, rows) * eb.transpose();
    for (int iu = 0; iu < rows; ++iu)
      for (int iv = 0; iv < res; ++iv)
        img.intensity[static_cast<std::size_t>(iv) * res + r0 + iu] = std::norm(f(iu, iv));
  });
  return img;
}

}  // namespace

DiffractionImage diffraction_image(const std::vector<Eigen::Vector3d>& pts, const Eigen::Vector3d& axis, double extent,
                                   int resolution, const std::string& label) {
  auto [u, v] = plane_basis(axis);
  return compute(pts, axis, u, v, extent, resolution, label);
}

DiffractionImage diffraction_image_rotated(const std::vector<Eigen::Vector3d>& pts, const Eigen::Vector3d& axis,
                                           double extent, int resolution, double angle) {
  auto [u, v] = plane_basis(axis);
  Eigen::Vector3d ur = std::cos(angle) * u + std::sin(angle) * v;
  Eigen::Vector3d vr = -std::sin(angle) * u + std::cos(angle) * v;
  return compute(pts, axis, ur, vr, extent, resolution, "rotated");
}

double relative_rms(const DiffractionImage& a, const DiffractionImage& b, double k_min) {
  double num = 0, den = 0;
  for (int iv = 0; iv < a.resolution; ++iv)
    for (int iu = 0; iu < a.resolution; ++iu) {
      double ku = a.k_at(iu), kv = a.k_at(iv), k2 = ku * ku + kv * kv;
      if (k2 > a.extent * a.extent || k2 < k_min * k_min) continue;
      double d = a.at(iu, iv) - b.at(iu, iv);
      num += d * d;
      den += a.at(iu, iv) * a.at(iu, iv);
    }
  return den > 0 ? std::sqrt(num / den) : 0.0;
}

double forward_peak_radius(const std::vector<Eigen::Vector3d>& pts) {
  double r = 0;
  for (auto& p : pts) r = std::max(r, p.norm());
  // first zero of the ball form factor, tan x = x
  return r > 0 ? 4.493409457909064 / r : 0.0;
}

double rotation_rms(const std::vector<Eigen::Vector3d>& pts, const Eigen::Vector3d& axis, double extent,
                    int resolution, double angle) {
  return relative_rms(diffraction_image(pts, axis, extent, resolution),
                      diffraction_image_rotated(pts, axis, extent, resolution, angle), forward_peak_radius(pts));
}

std::vector<Eigen::Vector3d> float_points(const std::vector<Vec3>& pts) {
  std::vector<Eigen::Vector3d> r(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) r[i] = to_double(pts[i]);
  return r;
}

std::vector<Vec3> ball(const std::vector<Vec3>& pts, const GoldenNum& r2) {
  std::vector<Vec3> r;
  for (auto& p : pts)
    if (squared_norm(p) <= r2) r.push_back(p);
  return r;
}

// ---------------------------------------------------------------- vertex configurations

namespace {

using PointIndex = std::unordered_map<Vec3, int, VecHash<Vec3>, VecEq<Vec3>>;

}  // namespace

VertexCensus vertex_configurations(const CellSet& cells) {
  if (cells.cells.empty()) throw Error("Empty", "no cells");
  VertexCensus vc;
  bool first = true;
  for (auto& c : cells.cells) {
    GoldenNum e = squared_norm(Vec3(c.v[0] - c.v[1]));
    if (first || e < vc.edge2) vc.edge2 = e;
    first = false;
  }
  // unit edges as point-index pairs
  PointIndex idx;
  std::vector<Vec3> pts;
  auto id = [&](const Vec3& p) {
    auto [it, ins] = idx.try_emplace(p, static_cast<int>(pts.size()));
    if (ins) pts.push_back(p);
    return it->second;
  };
  std::set<std::pair<int, int>> edges;
  for (auto& c : cells.cells) {
    if (squared_norm(Vec3(c.v[0] - c.v[1])) != vc.edge2) continue;
    int ids[4];
    for (int i = 0; i < 4; ++i) ids[i] = id(c.v[i]);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) edges.insert(std::minmax(ids[i], ids[j]));
  }
  std::set<Vec3, LexLess<Vec3>> dirs;
  for (auto& [a, b] : edges) {
    dirs.insert(Vec3(pts[b] - pts[a]));
    dirs.insert(Vec3(pts[a] - pts[b]));
  }
  vc.directions.assign(dirs.begin(), dirs.end());
  vc.direction_classes = static_cast<int>(vc.directions.size() / 2);
  std::unordered_map<Vec3, int, VecHash<Vec3>, VecEq<Vec3>> dir_id;
  for (std::size_t i = 0; i < vc.directions.size(); ++i) dir_id[vc.directions[i]] = static_cast<int>(i);

  // rotations preserving the direction set, as permutations
  std::vector<std::vector<int>> perms;
  for (auto& r : icosahedral_rotations()) {
    std::vector<int> p(vc.directions.size());
    bool ok = true;
    for (std::size_t i = 0; i < vc.directions.size() && ok; ++i) {
      auto it = dir_id.find(r * vc.directions[i]);
      if (it == dir_id.end()) ok = false;
      else p[i] = it->second;
    }
    if (ok) perms.push_back(std::move(p));
  }
  vc.symmetry_order = static_cast<int>(perms.size());

  std::vector<std::vector<int>> star(pts.size());
  for (auto& [a, b] : edges) {
    star[a].push_back(dir_id[Vec3(pts[b] - pts[a])]);
    star[b].push_back(dir_id[Vec3(pts[a] - pts[b])]);
  }
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return lex_cmp(pts[x], pts[y]) < 0; });
  vc.vertices.resize(pts.size());
  parallel_for(order.size(), [&](std::size_t k) {
    std::size_t i = order[k];
    std::vector<int> best;
    for (auto& p : perms) {
      std::vector<int> s;
      s.reserve(star[i].size());
      for (int d : star[i]) s.push_back(p[d]);
      std::sort(s.begin(), s.end());
      if (best.empty() || s < best) best = std::move(s);
    }
    if (perms.empty()) {
      best = star[i];
      std::sort(best.begin(), best.end());
    }
    vc.vertices[k] = {pts[i], static_cast<int>(star[i].size()), std::move(best)};
  });
  vc.min_degree = std::numeric_limits<int>::max();
  vc.max_degree = 0;
  for (auto& v : vc.vertices) {
    ++vc.census[v.star];
    vc.min_degree = std::min(vc.min_degree, v.degree);
    vc.max_degree = std::max(vc.max_degree, v.degree);
  }
  return vc;
}

// ---------------------------------------------------------------- edge crossings

std::optional<std::pair<GoldenNum, GoldenNum>> segment_crossing(const Vec3& a, const Vec3& b, const Vec3& c,
                                                                 const Vec3& d) {
  Vec3 u = b - a, w = d - c, ca = c - a;
  Vec3 n = u.cross(w);
  GoldenNum n2 = squared_norm(n);
  if (n2.is_zero()) return std::nullopt;
  if (!dot(ca, n).is_zero()) return std::nullopt;
  GoldenNum p = dot(Vec3(ca.cross(w)), n) / n2;
  GoldenNum q = dot(Vec3(ca.cross(u)), n) / n2;
  if (p.sign() <= 0 || p >= GoldenNum(1) || q.sign() <= 0 || q >= GoldenNum(1)) return std::nullopt;
  return std::make_pair(p, q);
}

CrossingCatalog edge_crossing_catalog(const CellSet& cells) {
  CrossingCatalog cat;
  std::set<std::array<Vec3, 2>, bool (*)(const std::array<Vec3, 2>&, const std::array<Vec3, 2>&)> es(
      [](const std::array<Vec3, 2>& x, const std::array<Vec3, 2>& y) {
        if (int c = lex_cmp(x[0], y[0])) return c < 0;
        return lex_cmp(x[1], y[1]) < 0;
      });
  for (auto& c : cells.cells)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        std::array<Vec3, 2> e = {c.v[i], c.v[j]};
        if (lex_cmp(e[0], e[1]) > 0) std::swap(e[0], e[1]);
        es.insert(e);
      }
  cat.edges.assign(es.begin(), es.end());
  const int m = static_cast<int>(cat.edges.size());
  if (m == 0) return cat;
  std::vector<Eigen::Vector3d> fa(m), fb(m);
  double h = 0;
  for (int i = 0; i < m; ++i) {
    fa[i] = to_double(cat.edges[i][0]);
    fb[i] = to_double(cat.edges[i][1]);
    h = std::max(h, (fb[i] - fa[i]).norm());
  }
  h = std::max(h, 1e-6);
  // spatial hash of segment bounding boxes
  struct KeyHash {
    std::size_t operator()(const std::array<long, 3>& k) const {
      return static_cast<std::size_t>(k[0] * 73856093L ^ k[1] * 19349663L ^ k[2] * 83492791L);
    }
  };
  std::unordered_map<std::array<long, 3>, std::vector<int>, KeyHash> grid;
  auto cell_of = [&](double x) { return static_cast<long>(std::floor(x / h)); };
  auto boxes = [&](int i, auto&& fn) {
    Eigen::Vector3d lo = fa[i].cwiseMin(fb[i]), hi = fa[i].cwiseMax(fb[i]);
    for (long x = cell_of(lo(0)); x <= cell_of(hi(0)); ++x)
      for (long y = cell_of(lo(1)); y <= cell_of(hi(1)); ++y)
        for (long z = cell_of(lo(2)); z <= cell_of(hi(2)); ++z) fn(std::array<long, 3>{x, y, z});
  };
  for (int i = 0; i < m; ++i) boxes(i, [&](const std::array<long, 3>& k) { grid[k].push_back(i); });

  std::vector<std::vector<EdgeCrossing>> found(m);
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t ii) {
    int i = static_cast<int>(ii);
    std::vector<int> cand;
    boxes(i, [&](const std::array<long, 3>& k) {
      auto it = grid.find(k);
      for (int j : it->second)
        if (j > i) cand.push_back(j);
    });
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    Eigen::Vector3d u = fb[i] - fa[i];
    for (int j : cand) {
      Eigen::Vector3d w = fb[j] - fa[j], r = fa[i] - fa[j];
      double a = u.dot(u), b = u.dot(w), c = w.dot(w), d = u.dot(r), e = w.dot(r);
      double den = a * c - b * b;
      if (den <= 1e-12 * a * c) continue;
      double s = (b * e - c * d) / den, t = (a * e - b * d) / den;
      if (s < -1e-7 || s > 1 + 1e-7 || t < -1e-7 || t > 1 + 1e-7) continue;
      if ((fa[i] + s * u - fa[j] - t * w).norm() > 1e-6) continue;
      auto pq = segment_crossing(cat.edges[i][0], cat.edges[i][1], cat.edges[j][0], cat.edges[j][1]);
      if (!pq) continue;
      Vec3 x = cat.edges[i][0] + pq->first * Vec3(cat.edges[i][1] - cat.edges[i][0]);
      found[i].push_back({x, pq->first, pq->second, {i, j}});
    }
  });
  for (auto& f : found)
    for (auto& c : f) {
      auto key = c.p < c.q ? std::make_pair(c.p, c.q) : std::make_pair(c.q, c.p);
      ++cat.census[key];
      cat.crossings.push_back(std::move(c));
    }
  return cat;
}

std::vector<Vec3> tetra_center_points(const CellSet& cells) {
  if (cells.cells.empty()) throw Error("Empty", "no cells");
  std::set<Vec3, LexLess<Vec3>> s;
  for (auto& c : cells.cells) s.insert(centroid(c));
  return {s.begin(), s.end()};
}

int dirichlet_scale(const std::vector<Vec3>& pts, int max_scale) {
  mpz_class l = 1;
  for (auto& p : pts)
    for (int i = 0; i < 3; ++i) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), p(i).a().get_den_mpz_t());
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), p(i).b().get_den_mpz_t());
      if (l > max_scale) return 0;
    }
  return static_cast<int>(l.get_si());
}

}  // namespace qc
