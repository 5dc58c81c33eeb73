#include "qc/grids3d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <Eigen/Geometry>

#include "qc/parallel.hpp"

namespace qc {

namespace {

Vec3 v3(const GoldenNum& a, const GoldenNum& b, const GoldenNum& c) { return Vec3(a, b, c); }

Mat3 cross_matrix(const Vec3& v) {
  Mat3 k;
  k << GoldenNum(0), -v(2), v(1), v(2), GoldenNum(0), -v(0), -v(1), v(0), GoldenNum(0);
  return k;
}

int cell_cmp(const TetraCell& a, const TetraCell& b) {
  if (a.grid_id != b.grid_id) return a.grid_id < b.grid_id ? -1 : 1;
  if (a.orientation != b.orientation) return a.orientation < b.orientation ? -1 : 1;
  if (int c = cmp(a.size, b.size)) return c;
  for (int i = 0; i < 4; ++i)
    if (int c = lex_cmp(a.v[i], b.v[i])) return c;
  return 0;
}

}  // namespace

void CellSet::finalize() {
  std::sort(cells.begin(), cells.end(), [](const TetraCell& a, const TetraCell& b) { return cell_cmp(a, b) < 0; });
  cells.erase(std::unique(cells.begin(), cells.end(),
                          [](const TetraCell& a, const TetraCell& b) { return cell_cmp(a, b) == 0; }),
              cells.end());
  std::unordered_set<Vec3, VecHash<Vec3>, VecEq<Vec3>> seen(points.begin(), points.end());
  for (auto& c : cells)
    for (auto& p : c.v) seen.insert(p);
  points.assign(seen.begin(), seen.end());
  std::sort(points.begin(), points.end(), LexLess<Vec3>());
}

const std::array<Vec3, 4>& tetra_normals() {
  static const std::array<Vec3, 4> n = {v3(1, 1, 1), v3(1, -1, -1), v3(-1, 1, -1), v3(-1, -1, 1)};
  return n;
}

Vec3 point_from_levels(const GoldenNum& c1, const GoldenNum& c2, const GoldenNum& c3) {
  return v3((c1 + c2) / 2, (c1 + c3) / 2, -(c2 + c3) / 2);
}

std::array<GoldenNum, 4> levels_of(const Vec3& x) {
  auto& n = tetra_normals();
  return {dot(n[0], x), dot(n[1], x), dot(n[2], x), dot(n[3], x)};
}

GoldenNum window_radius(const SpacingLaw& law, int extent) { return GoldenNum(extent) * law.long_gap(); }

std::vector<GoldenNum> default_cell_sizes(const SpacingLaw& law) {
  if (law.kind == SpacingLaw::Kind::periodic) return {law.T};
  return {law.long_gap(), law.long_gap() * GoldenNum::tau()};
}

CellSet tetragrid_cells(const SpacingLaw& law, const TetragridOptions& opts) {
  if (opts.extent < 1) throw Error("BadExtent", "extent must be >= 1");
  law.validate();
  std::vector<GoldenNum> sizes = opts.sizes.empty() ? default_cell_sizes(law) : opts.sizes;
  GoldenNum R2 = opts.window_r2 ? *opts.window_r2 : window_radius(law, opts.extent) * window_radius(law, opts.extent);
  const double Rd = std::sqrt(std::max(0.0, R2.to_double()));
  GoldenNum smax = *std::max_element(sizes.begin(), sizes.end());
  // every vertex level satisfies |c| <= sqrt3 R; face levels within that plus a size
  double bound = std::sqrt(3.0) * Rd + smax.to_double() + 1e-9;
  long lo = law.index_at_or_below(GoldenNum(-static_cast<long>(std::ceil(bound)) - 1));
  long hi = law.index_at_or_below(GoldenNum(static_cast<long>(std::ceil(bound)) + 1));
  std::vector<GoldenNum> F;
  std::vector<double> Fd;
  for (long n = lo; n <= hi; ++n) {
    GoldenNum x = law.offset(n);
    if (std::abs(x.to_double()) <= bound) {
      F.push_back(x);
      Fd.push_back(x.to_double());
    }
  }
  std::vector<int> orients;
  if (opts.down) orients.push_back(+1);
  if (opts.up) orients.push_back(-1);
  const double r2d = R2.to_double() + 1e-6;

  // blocks over the first face level; merged in index order
  std::vector<std::vector<TetraCell>> out(F.size());
  parallel_for(F.size(), [&](std::size_t a) {
    for (int o : orients)
      for (std::size_t b = 0; b < F.size(); ++b)
        for (std::size_t c = 0; c < F.size(); ++c)
          for (auto& s : sizes) {
            double d4d = o * s.to_double() - Fd[a] - Fd[b] - Fd[c];
            if (std::abs(d4d) > bound) continue;
            GoldenNum d4 = GoldenNum(o) * s - F[a] - F[b] - F[c];
            if (!law.contains(d4)) continue;
            std::array<GoldenNum, 4> d = {F[a], F[b], F[c], d4};
            std::array<double, 4> dd = {Fd[a], Fd[b], Fd[c], d4d};
            // quick float window test on all four vertices
            bool inside = true;
            for (int i = 0; i < 4 && inside; ++i) {
              std::array<double, 4> cv = dd;
              cv[i] -= o * s.to_double();
              double x = (cv[0] + cv[1]) / 2, y = (cv[0] + cv[2]) / 2, z = -(cv[1] + cv[2]) / 2;
              if (x * x + y * y + z * z > r2d) inside = false;
            }
            if (!inside) continue;
            TetraCell cell;
            cell.orientation = o > 0 ? Orientation::down : Orientation::up;
            cell.size = s;
            for (int i = 0; i < 4; ++i) {
              std::array<GoldenNum, 4> cv = d;
              cv[i] -= GoldenNum(o) * s;
              cell.v[i] = point_from_levels(cv[0], cv[1], cv[2]);
              if (squared_norm(cell.v[i]) > R2) inside = false;
            }
            if (inside) out[a].push_back(std::move(cell));
          }
  });
  CellSet cs;
  for (auto& blk : out)
    for (auto& c : blk) cs.cells.push_back(std::move(c));
  cs.provenance.kind = "tetragrid";
  cs.provenance.window_r2 = R2;
  cs.provenance.params["law"] = law.kind == SpacingLaw::Kind::periodic ? "periodic" : "quasiperiodic";
  cs.provenance.params["extent"] = std::to_string(opts.extent);
  cs.provenance.params["alpha"] = law.alpha.str();
  cs.provenance.params["beta"] = law.beta.str();
  cs.provenance.params["gamma"] = law.gamma.str();
  cs.provenance.params["T"] = law.T.str();
  std::string sz;
  for (auto& s : sizes) sz += (sz.empty() ? "" : ";") + s.str();
  cs.provenance.params["sizes"] = sz;
  cs.finalize();
  return cs;
}

std::vector<Vec3> icosagrid_normals() {
  const GoldenNum t = GoldenNum::tau(), s = GoldenNum::sigma();
  // sign-canonical: first nonzero component positive
  return {v3(1, 1, 1), v3(1, 1, -1), v3(1, -1, 1), v3(1, -1, -1),  //
          v3(0, s, t), v3(0, s, -t), v3(t, 0, s),  v3(t, 0, -s),   //
          v3(s, t, 0), v3(s, -t, 0)};
}

Mat3 golden_rotation_about(const Vec3& a, int sign) {
  if (squared_norm(a) != GoldenNum(3)) throw Error("BadAxis", "golden rotation axis needs |a|^2 = 3");
  GoldenNum c = (3 * GoldenNum::tau() - 1) / 4;
  // sin = sqrt3/(4 tau), so sin * a/|a| = a/(4 tau)
  GoldenNum k = GoldenNum(sign) / (4 * GoldenNum::tau());
  Mat3 r = c * Mat3::Identity() + k * cross_matrix(a) + ((GoldenNum(1) - c) / 3) * (a * a.transpose());
  return r;
}

GoldenRotation golden_rotation() {
  GoldenRotation g;
  g.axis = v3(1, 1, 1);
  g.cos_theta = (3 * GoldenNum::tau() - 1) / 4;
  g.matrix = golden_rotation_about(g.axis, 1);
  g.degrees = std::acos(g.cos_theta.to_double()) * 180 / std::numbers::pi;
  return g;
}

Mat3 reflection(const Vec3& v) {
  return Mat3(Mat3::Identity()) - (GoldenNum(2) / squared_norm(v)) * (v * v.transpose());
}

std::array<Mat3, 5> composition_frames(int sign) {
  std::array<Mat3, 5> f;
  f[0] = Mat3::Identity();
  for (int k = 0; k < 4; ++k) f[k + 1] = reflection(tetra_normals()[k]) * golden_rotation_about(tetra_normals()[k], sign);
  return f;
}

std::array<Eigen::Matrix3d, 5> composition_frames_at(double angle, int sign) {
  std::array<Eigen::Matrix3d, 5> f;
  f[0].setIdentity();
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector3d u = to_double(tetra_normals()[k]).normalized();
    Eigen::Matrix3d refl = Eigen::Matrix3d::Identity() - 2 * u * u.transpose();
    f[k + 1] = refl * Eigen::AngleAxisd(sign * angle, u).toRotationMatrix();
  }
  return f;
}

CellSet transform(const CellSet& s, const Mat3& m, int grid_id) {
  CellSet r;
  r.cells.reserve(s.cells.size());
  for (auto& c : s.cells) {
    TetraCell t = c;
    for (auto& p : t.v) p = m * p;
    t.grid_id = grid_id;
    r.cells.push_back(std::move(t));
  }
  r.provenance = s.provenance;
  r.finalize();
  return r;
}

CellSet origin_star(const GoldenNum& size, Orientation o) {
  CellSet s;
  int sg = o == Orientation::down ? 1 : -1;
  for (int i = 0; i < 4; ++i) {
    // faces: v_i.x <= size, v_j.x <= 0 (down); vertex i at the origin
    TetraCell c;
    c.orientation = o;
    c.size = size;
    for (int j = 0; j < 4; ++j) {
      std::array<GoldenNum, 4> lv;
      for (int m = 0; m < 4; ++m) lv[m] = m == i ? GoldenNum(sg) * size : GoldenNum(0);
      lv[j] -= GoldenNum(sg) * size;
      c.v[j] = point_from_levels(lv[0], lv[1], lv[2]);
    }
    s.cells.push_back(std::move(c));
  }
  s.provenance.kind = "star";
  s.finalize();
  return s;
}

namespace {

// direction of tetra i's axis must be parallel to a base normal
int axis_normal(const TetraCell& c, const Vec3& apex) {
  Vec3 a = (c.v[0] + c.v[1] + c.v[2] + c.v[3]) - 4 * apex;
  for (int k = 0; k < 4; ++k) {
    const Vec3& n = tetra_normals()[k];
    Vec3 x = a.cross(n);
    if (x == Vec3::Zero()) return k;
  }
  return -1;
}

}  // namespace

CellSet golden_composition(const CellSet& base, int sign) {
  if (base.cells.size() != 4) throw Error("BadBase", "golden composition needs 4 tetrahedra");
  // common vertex
  std::optional<Vec3> apex;
  for (auto& p : base.cells[0].v) {
    bool all = true;
    for (auto& c : base.cells)
      if (std::none_of(c.v.begin(), c.v.end(), [&](const Vec3& q) { return q == p; })) all = false;
    if (all) apex = p;
  }
  if (!apex) throw Error("BadBase", "base tetrahedra do not share a common vertex");
  for (auto& c : base.cells)
    if (axis_normal(c, *apex) < 0) throw Error("BadBase", "base tetrahedra are not aligned with the tetragrid normals");
  auto frames = composition_frames(sign);
  CellSet out;
  for (int k = 0; k < 5; ++k)
    for (auto& c : base.cells) {
      TetraCell t = c;
      for (auto& p : t.v) p = *apex + frames[k] * (p - *apex);
      t.grid_id = k;
      out.cells.push_back(std::move(t));
    }
  out.provenance.kind = "20G";
  out.provenance.params["sign"] = std::to_string(sign);
  out.finalize();
  return out;
}

CellSet evenly_distributed_cluster() {
  CellSet g = golden_composition(origin_star(), 1);
  CellSet out;
  for (auto& c : g.cells) {
    Vec3 axis = c.v[0] + c.v[1] + c.v[2] + c.v[3];  // apex at the origin
    // rescale to |a|^2 = 3
    GoldenNum n2 = squared_norm(axis);
    // axis is parallel to a dodecahedron vertex direction; find the scale
    Vec3 a3;
    bool found = false;
    for (auto& n : icosagrid_normals())
      for (int sg : {1, -1}) {
        Vec3 d = GoldenNum(sg) * n;
        if (axis.cross(d) == Vec3::Zero() && dot(axis, d).sign() > 0) {
          a3 = d;
          found = true;
        }
      }
    if (!found || n2.is_zero()) throw Error("Internal", "20G tetrahedron axis is not threefold");
    Mat3 r = golden_rotation_about(a3, -1);
    TetraCell t = c;
    for (auto& p : t.v) p = r * p;
    out.cells.push_back(std::move(t));
  }
  out.provenance.kind = "even20";
  out.finalize();
  return out;
}

SpacingLaw fig_default_law() { return SpacingLaw::fibonacci(0, GoldenNum::frac(1, 2)); }

CellSet fibonacci_icosagrid(const SpacingLaw& law, const TetragridOptions& opts) {
  CellSet base = tetragrid_cells(law, opts);
  auto frames = composition_frames(1);
  CellSet out;
  for (int k = 0; k < 5; ++k) {
    std::vector<TetraCell> cs(base.cells.size());
    parallel_for(base.cells.size(), [&](std::size_t i) {
      TetraCell t = base.cells[i];
      for (auto& p : t.v) p = frames[k] * p;
      t.grid_id = k;
      t.chirality = t.orientation == Orientation::down ? Chirality::left : Chirality::right;
      cs[i] = std::move(t);
    });
    for (auto& c : cs) out.cells.push_back(std::move(c));
  }
  out.provenance = base.provenance;
  out.provenance.kind = law.kind == SpacingLaw::Kind::periodic ? "icosagrid" : "fig";
  out.finalize();
  return out;
}

CellSet icosagrid(int extent) {
  TetragridOptions o;
  o.extent = extent;
  return fibonacci_icosagrid(SpacingLaw::periodic(1, 0), o);
}

std::pair<CellSet, CellSet> chirality_split(const CellSet& cells) {
  CellSet l, r;
  for (auto& c : cells.cells) {
    if (c.chirality == Chirality::both) throw Error("MissingProvenance", "cell lacks orientation provenance");
    (c.chirality == Chirality::left ? l : r).cells.push_back(c);
  }
  l.provenance = r.provenance = cells.provenance;
  l.finalize();
  r.finalize();
  return {l, r};
}

namespace {

Vec3 projective(Vec3 n) {
  for (int i = 0; i < 3; ++i)
    if (!n(i).is_zero()) {
      GoldenNum d = n(i);
      for (int j = 0; j < 3; ++j) n(j) /= d;
      return n;
    }
  throw Error("Internal", "degenerate face");
}

}  // namespace

std::vector<PlaneClass> plane_classes(const CellSet& cells) {
  if (cells.cells.empty()) throw Error("Empty", "no cells");
  std::map<Vec3, std::set<GoldenNum>, LexLess<Vec3>> m;
  for (auto& c : cells.cells)
    for (int f = 0; f < 4; ++f) {
      const Vec3 &a = c.v[(f + 1) % 4], &b = c.v[(f + 2) % 4], &d = c.v[(f + 3) % 4];
      Vec3 n = projective((b - a).cross(d - a));
      m[n].insert(dot(n, a));
    }
  std::vector<PlaneClass> out;
  for (auto& [n, offs] : m) out.push_back({n, {offs.begin(), offs.end()}});
  return out;
}

std::size_t plane_class_count(const CellSet& cells) { return plane_classes(cells).size(); }

std::vector<TwentyGroup> find_20g(const CellSet& cells) {
  struct Key {
    Vec3 p;
    int o;
    GoldenNum s;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return VecHash<Vec3>()(k.p) * 31 + k.o * 7 + k.s.hash(); }
  };
  struct KeyEq {
    bool operator()(const Key& a, const Key& b) const { return a.o == b.o && a.s == b.s && a.p == b.p; }
  };
  std::unordered_map<Key, std::array<int, 5>, KeyHash, KeyEq> count;
  for (auto& c : cells.cells) {
    if (c.grid_id < 0 || c.grid_id > 4) continue;
    for (auto& p : c.v) {
      auto& a = count[{p, static_cast<int>(c.orientation), c.size}];
      ++a[c.grid_id];
    }
  }
  std::vector<TwentyGroup> out;
  for (auto& [k, a] : count)
    if (std::all_of(a.begin(), a.end(), [](int x) { return x >= 4; }))
      out.push_back({k.p, static_cast<Orientation>(k.o), k.s});
  std::sort(out.begin(), out.end(), [](const TwentyGroup& x, const TwentyGroup& y) {
    if (int c = cmp(squared_norm(x.center), squared_norm(y.center))) return c < 0;
    if (int c = lex_cmp(x.center, y.center)) return c < 0;
    if (x.orientation != y.orientation) return x.orientation < y.orientation;
    return x.size < y.size;
  });
  return out;
}

bool is_regular(const TetraCell& c) {
  GoldenNum e = squared_norm(Vec3(c.v[0] - c.v[1]));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (squared_norm(Vec3(c.v[i] - c.v[j])) != e) return false;
  return !e.is_zero();
}

Vec3 centroid(const TetraCell& c) { return (c.v[0] + c.v[1] + c.v[2] + c.v[3]) / GoldenNum(4); }

namespace {

bool preserves(const Mat3& m, const std::vector<Vec3>& dirs) {
  std::unordered_set<Vec3, VecHash<Vec3>, VecEq<Vec3>> s(dirs.begin(), dirs.end());
  for (auto& d : dirs)
    if (!s.count(m * d)) return false;
  return true;
}

std::vector<Vec3> frame_directions() {
  std::vector<Vec3> d;
  for (auto& n : icosagrid_normals()) {
    d.push_back(n);
    d.push_back(-n);
  }
  return d;
}

}  // namespace

namespace {

std::pair<Vec3, Mat3> fivefold() {
  static const std::pair<Vec3, Mat3> r = [] {
    const GoldenNum t = GoldenNum::tau();
    auto dirs = frame_directions();
    for (Vec3 a : {v3(0, 1, t), v3(1, t, 0), v3(t, 0, 1), v3(0, t, 1), v3(t, 1, 0), v3(1, 0, t)}) {
      GoldenNum c = GoldenNum::sigma() / 2;  // cos 72
      GoldenNum n2 = squared_norm(a);        // tau + 2; sin72/|a| = 1/2
      Mat3 m = c * Mat3::Identity() + GoldenNum::frac(1, 2) * cross_matrix(a) +
               ((GoldenNum(1) - c) / n2) * (a * a.transpose());
      if (preserves(m, dirs)) return std::make_pair(a, m);
    }
    throw Error("Internal", "no fivefold axis preserves the frames");
  }();
  return r;
}

}  // namespace

Mat3 fivefold_rotation() { return fivefold().second; }

Vec3 fivefold_axis() { return fivefold().first; }

std::vector<Mat3> icosahedral_rotations() {
  static const std::vector<Mat3> g = [] {
    Mat3 three;
    three << GoldenNum(0), GoldenNum(0), GoldenNum(1), GoldenNum(1), GoldenNum(0), GoldenNum(0), GoldenNum(0),
        GoldenNum(1), GoldenNum(0);
    std::vector<Mat3> gens = {fivefold_rotation(), three};
    std::vector<Mat3> all = {Mat3::Identity()};
    for (std::size_t i = 0; i < all.size(); ++i)
      for (auto& s : gens) {
        Mat3 m = all[i] * s;
        if (std::none_of(all.begin(), all.end(), [&](const Mat3& x) { return x == m; })) all.push_back(m);
      }
    std::sort(all.begin(), all.end(), [](const Mat3& a, const Mat3& b) {
      for (int i = 0; i < 9; ++i)
        if (int c = cmp(a(i), b(i))) return c < 0;
      return false;
    });
    return all;
  }();
  return g;
}

}  // namespace qc
