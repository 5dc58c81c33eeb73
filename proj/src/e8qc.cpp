#include "qc/e8qc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <random>

#include "qc/parallel.hpp"

namespace qc {

namespace {

const int kH[4][4] = {{-1, -1, -1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}};  // 2H

Vec4 v4(const GoldenNum& a, const GoldenNum& b, const GoldenNum& c, const GoldenNum& d) { return Vec4(a, b, c, d); }

GoldenNum sqrt5() { return 2 * GoldenNum::tau() - 1; }

}  // namespace

// ---------------------------------------------------------------- E8

bool in_e8(const E8Vec& x) {
  int par = x[0] & 1, sum = 0;
  for (int v : x) {
    if ((v & 1) != par) return false;
    sum += v;
  }
  return ((sum % 4) + 4) % 4 == 0;
}

int e8_norm4(const E8Vec& x) {
  int n = 0;
  for (int v : x) n += v * v;
  return n;
}

std::vector<E8Root> e8_roots() {
  std::vector<E8Root> r;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j)
      for (int si : {2, -2})
        for (int sj : {2, -2}) {
          E8Vec v{};
          v[i] = si;
          v[j] = sj;
          r.push_back({v});
        }
  for (int m = 0; m < 256; ++m) {
    if (__builtin_popcount(m) % 2) continue;
    E8Vec v;
    for (int i = 0; i < 8; ++i) v[i] = (m >> i) & 1 ? -1 : 1;
    r.push_back({v});
  }
  std::sort(r.begin(), r.end(), [](const E8Root& a, const E8Root& b) { return a.twice < b.twice; });
  return r;
}

// ---------------------------------------------------------------- icosians

Icosian qmul(const Icosian& p, const Icosian& q) {
  const GoldenNum &a1 = p(0), &b1 = p(1), &c1 = p(2), &d1 = p(3);
  const GoldenNum &a2 = q(0), &b2 = q(1), &c2 = q(2), &d2 = q(3);
  return v4(a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2, a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2, a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2);
}

Icosian qconj(const Icosian& q) { return v4(q(0), -q(1), -q(2), -q(3)); }

GoldenNum quat_norm(const Icosian& q) { return squared_norm(q); }

GoldenNum euclid_norm(const Icosian& q) { return GoldenNum(quat_norm(q).euclid_weight()); }

const std::vector<Icosian>& unit_icosians() {
  static const std::vector<Icosian> u = [] {
    std::vector<Icosian> r;
    const GoldenNum h = GoldenNum::frac(1, 2);
    for (int i = 0; i < 4; ++i)
      for (int s : {1, -1}) {
        Icosian q = Icosian::Constant(GoldenNum(0));
        q(i) = s;
        r.push_back(q);
      }
    for (int m = 0; m < 16; ++m) {
      Icosian q;
      for (int i = 0; i < 4; ++i) q(i) = (m >> i) & 1 ? -h : h;
      r.push_back(q);
    }
    // 1/2 (0, 1, sigma, tau) under even permutations and signs
    const std::array<GoldenNum, 4> base = {0, h, h * GoldenNum::sigma(), h * GoldenNum::tau()};
    std::array<int, 4> perm = {0, 1, 2, 3};
    do {
      int inv = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) inv += perm[i] > perm[j];
      if (inv % 2) continue;
      for (int m = 0; m < 8; ++m) {
        Icosian q;
        int bit = 0;
        for (int i = 0; i < 4; ++i) {
          GoldenNum x = base[perm[i]];
          if (perm[i] != 0 && ((m >> bit++) & 1)) x = -x;
          q(i) = x;
        }
        r.push_back(q);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::sort(r.begin(), r.end(), LexLess<Icosian>());
    return r;
  }();
  return u;
}

Icosian e8_to_icosian(const E8Vec& x) {
  // y / tau = a + (H b) sigma
  Icosian y;
  for (int i = 0; i < 4; ++i) {
    int hb = 0;
    for (int j = 0; j < 4; ++j) hb += kH[i][j] * x[4 + j];  // 4 (H b)
    y(i) = GoldenNum(mpq_class(x[i], 2)) + GoldenNum(mpq_class(hb, 4)) * GoldenNum::sigma();
  }
  const Icosian p = v4(GoldenNum::frac(1, 2), GoldenNum::frac(1, 2), 0, 0);
  return qmul(p, y);
}

E8Vec icosian_to_e8(const Icosian& q) {
  const Icosian pinv = v4(1, -1, 0, 0);
  Icosian y = qmul(pinv, q) * GoldenNum::tau();
  E8Vec x{};
  for (int i = 0; i < 4; ++i) {
    mpq_class a2 = 2 * y(i).b();
    if (a2.get_den() != 1) throw Error("NotInRing", "quaternion is not an icosian");
    x[i] = static_cast<int>(a2.get_num().get_si());
  }
  for (int j = 0; j < 4; ++j) {
    mpq_class b2 = 0;  // 2 (H^T y0)_j
    for (int i = 0; i < 4; ++i) b2 += mpq_class(kH[i][j]) * y(i).a();
    if (b2.get_den() != 1) throw Error("NotInRing", "quaternion is not an icosian");
    x[4 + j] = static_cast<int>(b2.get_num().get_si());
  }
  if (!in_e8(x)) throw Error("NotInRing", "quaternion is not an icosian");
  return x;
}

// ---------------------------------------------------------------- projection

const Mat4& h_block() {
  static const Mat4 h = [] {
    Mat4 m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = GoldenNum::frac(kH[i][j], 2);
    return m;
  }();
  return h;
}

ProjectionSpec projection_spec(WindowKind kind, GoldenNum radius) {
  ProjectionSpec s;
  s.window = kind;
  s.radius = radius;
  s.H = h_block();
  GoldenNum inv5 = sqrt5() / 5;
  s.Pi.setConstant(GoldenNum(0));
  for (int i = 0; i < 4; ++i) {
    s.Pi(i, i) = GoldenNum::tau() * inv5;
    s.Pi(4 + i, 4 + i) = GoldenNum::sigma() * inv5;
    for (int j = 0; j < 4; ++j) {
      s.Pi(i, 4 + j) = s.H(i, j) * inv5;
      s.Pi(4 + j, i) = s.H(i, j) * inv5;
    }
  }
  return s;
}

GoldenNum voronoi_window_volume() { return GoldenNum::frac(5, 6) * tau_pow(3); }

double voronoi_ball_radius() {
  return std::pow(2 * voronoi_window_volume().to_double() / (std::numbers::pi * std::numbers::pi), 0.25);
}

GoldenNum ProjectionSpec::window_r2() const {
  if (window == WindowKind::voronoi_approx) {
    // not in the golden field; rational just below r^2
    double r2 = voronoi_ball_radius() * voronoi_ball_radius();
    return GoldenNum(mpq_class(static_cast<long>(std::floor(r2 * 1e12)), 1000000000000L));
  }
  return radius * radius;
}

int exact_rank(GMat<8, 8> m) {
  int rank = 0;
  for (int c = 0; c < 8 && rank < 8; ++c) {
    int piv = -1;
    for (int r = rank; r < 8; ++r)
      if (!m(r, c).is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    m.row(piv).swap(m.row(rank));
    GoldenNum inv = m(rank, c).inverse();
    for (int r = 0; r < 8; ++r) {
      if (r == rank || m(r, c).is_zero()) continue;
      GoldenNum f = m(r, c) * inv;
      for (int k = c; k < 8; ++k) m(r, k) -= f * m(rank, k);
    }
    ++rank;
  }
  return rank;
}

namespace {

// 40 perp^2 = 5 n - Qd sqrt5 with n = |2x|^2, Qd = |A|^2 - |B|^2 + 2 A.(2H).B
struct PerpParts {
  long n, qd;
};

PerpParts perp_parts(const E8Vec& x) {
  long n = 0, a2 = 0, b2 = 0, ahb = 0;
  for (int i = 0; i < 4; ++i) {
    n += x[i] * x[i] + x[4 + i] * x[4 + i];
    a2 += x[i] * x[i];
    b2 += x[4 + i] * x[4 + i];
    for (int j = 0; j < 4; ++j) ahb += x[i] * kH[i][j] * x[4 + j];
  }
  return {n, a2 - b2 + 2 * ahb};
}

GoldenNum perp_exact(const PerpParts& p) {
  // n/8 - sqrt5 qd / 40,  sqrt5 = 2 tau - 1
  return GoldenNum(mpq_class(p.n, 8) + mpq_class(p.qd, 40), mpq_class(-p.qd, 20));
}

}  // namespace

GoldenNum perp_norm2(const E8Vec& x) { return perp_exact(perp_parts(x)); }

bool QC4::contains(const Icosian& q) const { return set_.count(q) > 0; }

void QC4::index() { set_ = {points.begin(), points.end()}; }

QC4 elser_sloane_points(const ProjectionSpec& spec, const GoldenNum& shell_radius) {
  if (spec.window == WindowKind::ball && spec.radius.sign() <= 0) throw Error("EmptyWindow", "window radius must be > 0");
  if (shell_radius.sign() <= 0) throw Error("BadShell", "shell radius must be > 0");
  QC4 qc;
  qc.window = spec.window;
  qc.shell2 = shell_radius * shell_radius;
  qc.window_r2 = spec.window_r2();
  const long nmax = (GoldenNum(4) * qc.shell2).floor().get_si();
  const int lim = static_cast<int>(std::floor(std::sqrt(static_cast<double>(nmax))));
  const double w2 = qc.window_r2.to_double();
  const double s5 = std::sqrt(5.0);

  // blocks over the first doubled coordinate
  std::vector<int> firsts;
  for (int v = -lim; v <= lim; ++v) firsts.push_back(v);
  std::vector<std::vector<E8Vec>> blocks(firsts.size());
  parallel_for(firsts.size(), [&](std::size_t bi) {
    const int x0 = firsts[bi];
    const int par = x0 & 1;
    E8Vec x{};
    x[0] = x0;
    auto& out = blocks[bi];
    auto rec = [&](auto&& self, int i, long rem) -> void {
      if (i == 8) {
        int sum = 0;
        for (int v : x) sum += v;
        if (((sum % 4) + 4) % 4) return;
        PerpParts pp = perp_parts(x);
        double pd = pp.n / 8.0 - s5 * pp.qd / 40.0;
        if (pd > w2 + 1e-9) return;
        if (pd >= w2 - 1e-9 && perp_exact(pp) > qc.window_r2) return;
        out.push_back(x);
        return;
      }
      int m = static_cast<int>(std::floor(std::sqrt(static_cast<double>(rem))));
      for (int v = -m; v <= m; ++v) {
        if ((v & 1) != par) continue;
        x[i] = v;
        self(self, i + 1, rem - static_cast<long>(v) * v);
      }
    };
    long rem = nmax - static_cast<long>(x0) * x0;
    if (rem >= 0) rec(rec, 1, rem);
  });
  std::vector<E8Vec> lat;
  for (auto& b : blocks) lat.insert(lat.end(), b.begin(), b.end());
  std::vector<Icosian> pts(lat.size());
  parallel_for(lat.size(), [&](std::size_t i) { pts[i] = e8_to_icosian(lat[i]); });
  std::vector<std::size_t> ord(lat.size());
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return lex_cmp(pts[a], pts[b]) < 0; });
  qc.points.reserve(ord.size());
  qc.lattice.reserve(ord.size());
  for (auto i : ord) {
    qc.points.push_back(pts[i]);
    qc.lattice.push_back(lat[i]);
  }
  // |x_par|^2 = (2 tau / sqrt5) |q|^2 and |x_par|^2 + perp^2 <= shell^2 is enough
  GoldenNum room = qc.shell2 - qc.window_r2;
  qc.complete_q2 = room.sign() > 0 ? room * sqrt5() / (2 * GoldenNum::tau()) : GoldenNum(0);
  qc.index();
  return qc;
}

ClosureReport tau_closure(const QC4& qc, int samples, std::uint64_t seed) {
  std::vector<std::size_t> interior;
  const GoldenNum t2 = GoldenNum::tau() * GoldenNum::tau();
  for (std::size_t i = 0; i < qc.points.size(); ++i)
    if (!qc.points[i].isZero() && t2 * quat_norm(qc.points[i]) <= qc.complete_q2) interior.push_back(i);
  ClosureReport r;
  if (interior.empty()) return r;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, interior.size() - 1);
  for (int s = 0; s < samples; ++s) {
    const Icosian& p = qc.points[interior[pick(rng)]];
    ++r.tested;
    if (!qc.contains(GoldenNum::tau() * p)) ++r.failures;
  }
  return r;
}

// ---------------------------------------------------------------- 600-cells

const std::vector<std::array<int, 4>>& cell600_facets() {
  static const std::vector<std::array<int, 4>> f = [] {
    auto& u = unit_icosians();
    const GoldenNum e2 = GoldenNum::sigma() * GoldenNum::sigma();
    int n = static_cast<int>(u.size());
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) adj[i][j] = i != j && squared_norm(Icosian(u[i] - u[j])) == e2;
    std::vector<std::array<int, 4>> out;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        if (!adj[a][b]) continue;
        for (int c = b + 1; c < n; ++c) {
          if (!adj[a][c] || !adj[b][c]) continue;
          for (int d = c + 1; d < n; ++d)
            if (adj[a][d] && adj[b][d] && adj[c][d]) out.push_back({a, b, c, d});
        }
      }
    return out;
  }();
  return f;
}

bool cells600_intersect(const Icosian& c1, const Icosian& c2) {
  // interiors overlap iff d lies strictly inside the doubled cell: n_f . d < 2 h_f for all f
  static const std::vector<std::pair<Icosian, GoldenNum>> planes = [] {
    std::vector<std::pair<Icosian, GoldenNum>> p;
    auto& u = unit_icosians();
    for (auto& f : cell600_facets()) {
      Icosian n = u[f[0]] + u[f[1]] + u[f[2]] + u[f[3]];
      p.push_back({n, dot(n, u[f[0]])});
    }
    return p;
  }();
  Icosian d = c2 - c1;
  for (auto& [n, h] : planes)
    if (dot(n, d) >= 2 * h) return false;
  return true;
}

std::vector<Cell600> unit_600cells(const QC4& qc) {
  auto& u = unit_icosians();
  std::vector<char> hit(qc.points.size());
  const double cq = std::sqrt(std::max(0.0, qc.complete_q2.to_double()));
  parallel_for(qc.points.size(), [&](std::size_t i) {
    const Icosian& c = qc.points[i];
    // only centers whose cell lies in the complete region
    if (std::sqrt(quat_norm(c).to_double()) + 1 > cq + 1e-9) return;
    for (auto& v : u)
      if (!qc.contains(c + v)) return;
    hit[i] = 1;
  });
  std::vector<Cell600> out;
  for (std::size_t i = 0; i < hit.size(); ++i)
    if (hit[i]) out.push_back({qc.points[i]});
  return out;
}

// ---------------------------------------------------------------- cross-sections

std::string to_string(SectionKind k) {
  switch (k) {
    case SectionKind::type1: return "type1";
    case SectionKind::type2: return "type2";
    default: return "icosahedral";
  }
}

SectionKind parse_section_kind(const std::string& s) {
  if (s == "type1" || s == "I" || s == "1") return SectionKind::type1;
  if (s == "type2" || s == "II" || s == "2") return SectionKind::type2;
  if (s == "icosahedral" || s == "ico") return SectionKind::icosahedral;
  throw Error("BadKind", "unknown cross-section kind: " + s);
}

SectionParams::SectionParams() {
  GoldenNum t2 = -(GoldenNum::tau() * GoldenNum::tau());
  facet_normal = v4(t2, t2, 0, 0);
}

namespace {

struct FacetFrame {
  std::array<Vec4, 4> w;  // facet vertices minus the facet center, lexicographic
  Vec4 center;            // n / 4
  GoldenNum scale;        // 3 tau / (4 |w|^2)
};

FacetFrame facet_frame(const SectionParams& p) {
  const Vec4& n = p.facet_normal;
  GoldenNum nn = squared_norm(n);
  std::vector<Vec4> fv;
  for (auto& u : unit_icosians())
    if (dot(n, u) * 4 == nn) fv.push_back(u);
  if (fv.size() != 4) throw Error("BadFacet", "facet normal does not select a 600-cell facet");
  FacetFrame f;
  f.center = n / GoldenNum(4);
  for (int i = 0; i < 4; ++i) f.w[i] = fv[i] - f.center;
  f.scale = 3 * GoldenNum::tau() / (4 * squared_norm(f.w[0]));
  return f;
}

Vec3 levels_to_point(const std::array<GoldenNum, 4>& c) { return point_from_levels(c[0], c[1], c[2]); }

std::array<GoldenNum, 4> levels_in_frame(const FacetFrame& f, const Vec4& rel) {
  std::array<GoldenNum, 4> c;
  for (int i = 0; i < 4; ++i) c[i] = dot(f.w[i], rel) * f.scale;
  return c;
}

using PointSet3 = std::unordered_set<Vec3, VecHash<Vec3>, VecEq<Vec3>>;

// grid-aligned regular tetrahedra with the given level sizes
std::vector<TetraCell> aligned_cells(const std::vector<Vec3>& pts, const PointSet3& set,
                                     const std::vector<GoldenNum>& sizes) {
  std::vector<std::vector<TetraCell>> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    auto c = levels_of(pts[i]);
    for (int o : {1, -1})
      for (auto& s : sizes) {
        // pts[i] is vertex 0; vertex j adds o s (e_0 - e_j) in levels
        TetraCell cell;
        cell.orientation = o > 0 ? Orientation::down : Orientation::up;
        cell.size = s;
        cell.v[0] = pts[i];
        bool ok = true;
        for (int j = 1; j < 4 && ok; ++j) {
          auto cj = c;
          cj[0] += GoldenNum(o) * s;
          cj[j] -= GoldenNum(o) * s;
          cell.v[j] = levels_to_point(cj);
          ok = set.count(cell.v[j]) > 0;
        }
        if (ok) out[i].push_back(std::move(cell));
      }
  });
  std::vector<TetraCell> r;
  for (auto& b : out)
    for (auto& c : b) r.push_back(std::move(c));
  return r;
}

// regular tetrahedra among pts with one of the squared edges
std::vector<TetraCell> clique_cells(const std::vector<Vec3>& pts, const std::vector<GoldenNum>& edge2) {
  int n = static_cast<int>(pts.size());
  std::vector<Eigen::Vector3d> pd(n);
  for (int i = 0; i < n; ++i) pd[i] = to_double(pts[i]);
  std::vector<TetraCell> r;
  for (auto& e2 : edge2) {
    double ed = e2.to_double();
    auto near = [&](int a, int b) {
      return std::abs((pd[a] - pd[b]).squaredNorm() - ed) < 1e-6 && squared_norm(Vec3(pts[a] - pts[b])) == e2;
    };
    std::vector<std::vector<int>> nb(n);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (near(a, b)) nb[a].push_back(b);
    for (int a = 0; a < n; ++a) {
      auto& na = nb[a];
      for (std::size_t i = 0; i < na.size(); ++i)
        for (std::size_t j = i + 1; j < na.size(); ++j) {
          if (!near(na[i], na[j])) continue;
          for (std::size_t k = j + 1; k < na.size(); ++k)
            if (near(na[i], na[k]) && near(na[j], na[k])) {
              TetraCell c;
              c.v = {pts[a], pts[na[i]], pts[na[j]], pts[na[k]]};
              c.size = e2;
              r.push_back(std::move(c));
            }
        }
    }
  }
  return r;
}

}  // namespace

std::array<GoldenNum, 4> section_levels(const SectionParams& p, SectionKind kind, const Icosian& q) {
  FacetFrame f = facet_frame(p);
  Vec4 rel = kind == SectionKind::type2 ? Vec4(q - f.center) : q;
  return levels_in_frame(f, rel);
}

CrossSection cross_section(const QC4& qc, SectionKind kind, const SectionParams& p) {
  CrossSection s;
  s.kind = kind;
  std::vector<Vec3> pts;
  if (kind == SectionKind::icosahedral) {
    if (qc.complete_q2 < GoldenNum::tau() * GoldenNum::tau())
      throw Error("WindowTooSmall", "search shell too small for an icosahedral shell beyond the unit one");
    s.normal = v4(1, 0, 0, 0);
    s.offset = 0;
    for (auto& q : qc.points)
      if (q(0).is_zero() && quat_norm(q) <= qc.complete_q2) pts.push_back(Vec3(q(1), q(2), q(3)));
    s.complete_r2 = qc.complete_q2;
    s.unit_size = GoldenNum::sigma();
  } else {
    FacetFrame f = facet_frame(p);
    s.normal = p.facet_normal;
    Vec4 off = kind == SectionKind::type2 ? f.center : Vec4(Vec4::Constant(GoldenNum(0)));
    s.offset = dot(s.normal, off);
    // 3D scale factor of the in-plane similarity
    GoldenNum k3 = squared_norm(levels_to_point(levels_in_frame(f, f.w[0]))) / squared_norm(f.w[0]);
    GoldenNum room = qc.complete_q2 - squared_norm(off);
    s.complete_r2 = room.sign() > 0 ? k3 * room : GoldenNum(0);
    for (auto& q : qc.points) {
      if (dot(s.normal, q) != s.offset) continue;
      Vec3 x = levels_to_point(levels_in_frame(f, Vec4(q - off)));
      if (squared_norm(x) <= s.complete_r2) pts.push_back(x);
    }
    // facet cell has level size tau
    s.unit_size = GoldenNum::tau();
  }
  std::sort(pts.begin(), pts.end(), LexLess<Vec3>());
  PointSet3 set(pts.begin(), pts.end());
  if (kind == SectionKind::icosahedral) {
    s.cells.cells = clique_cells(pts, {s.unit_size * s.unit_size, GoldenNum(1)});
  } else {
    s.cells.cells = aligned_cells(pts, set, {s.unit_size, s.unit_size * GoldenNum::tau()});
  }
  for (auto& c : s.cells.cells) c.chirality = c.orientation == Orientation::down ? Chirality::left : Chirality::right;
  s.cells.points = pts;
  s.cells.provenance.kind = "xsection-" + to_string(kind);
  s.cells.provenance.window_r2 = s.complete_r2;
  s.cells.provenance.params["kind"] = to_string(kind);
  s.cells.finalize();
  // finalize keeps isolated slice points as well
  return s;
}

namespace {

std::array<GoldenNum, 4> shift_levels(int i) {
  std::array<GoldenNum, 4> d;
  for (int m = 0; m < 4; ++m) d[m] = GoldenNum::tau() / 4 - (m == i ? GoldenNum::tau() : GoldenNum(0));
  return d;
}

}  // namespace

CellSet compound_qc(const CrossSection& s, int copies) {
  if (s.kind == SectionKind::icosahedral) throw Error("BadKind", "compound quasicrystals use type1 or type2 sections");
  const int full = s.kind == SectionKind::type1 ? 5 : 20;
  if (copies == 0) copies = full;
  if (copies == 1) return s.cells;
  if (copies != full) throw Error("BadCopies", "copies must be 1 or " + std::to_string(full));
  auto frames = composition_frames(1);
  CellSet out;
  std::vector<Vec3> pts;
  auto add_copy = [&](int k, const GoldenNum& scale, const Vec3& shift) {
    for (auto& c : s.cells.cells) {
      TetraCell t = c;
      for (auto& p : t.v) p = frames[k] * (scale * (p + shift));
      t.size = c.size * scale;
      t.grid_id = k;
      out.cells.push_back(std::move(t));
    }
    for (auto& p : s.cells.points) pts.push_back(frames[k] * (scale * (p + shift)));
  };
  GoldenNum window = s.complete_r2;
  if (s.kind == SectionKind::type1) {
    for (int k = 0; k < 5; ++k) add_copy(k, 1, Vec3::Constant(GoldenNum(0)));
  } else {
    const GoldenNum t = GoldenNum::tau();
    double r = std::sqrt(s.complete_r2.to_double()), worst = r;
    for (int i = 0; i < 4; ++i) {
      auto d = shift_levels(i);
      Vec3 sh = levels_to_point(d);
      worst = std::min(worst, r - std::sqrt(squared_norm(sh).to_double()));
      for (int k = 0; k < 5; ++k) add_copy(k, t, sh);
    }
    double w = std::max(0.0, t.to_double() * worst);
    window = GoldenNum(mpq_class(static_cast<long>(std::floor(w * w * 1e9)), 1000000000L));
  }
  // keep only what lies in the guaranteed region
  std::vector<TetraCell> kept;
  for (auto& c : out.cells)
    if (std::all_of(c.v.begin(), c.v.end(), [&](const Vec3& p) { return squared_norm(p) <= window; }))
      kept.push_back(std::move(c));
  out.cells = std::move(kept);
  for (auto& c : out.cells) c.chirality = c.orientation == Orientation::down ? Chirality::left : Chirality::right;
  for (auto& p : pts)
    if (squared_norm(p) <= window) out.points.push_back(p);
  out.provenance.kind = s.kind == SectionKind::type1 ? "cqc1" : "cqc2";
  out.provenance.window_r2 = window;
  out.provenance.params["copies"] = std::to_string(copies);
  out.finalize();
  return out;
}

DihedralCheck dihedral_identities() {
  DihedralCheck d;
  auto& u = unit_icosians();
  auto& f = cell600_facets();
  // two facets sharing a triangle
  auto normal = [&](const std::array<int, 4>& t) { return Icosian(u[t[0]] + u[t[1]] + u[t[2]] + u[t[3]]); };
  Icosian n0 = normal(f[0]);
  for (std::size_t j = 1; j < f.size(); ++j) {
    int shared = 0;
    for (int a : f[0])
      for (int b : f[j]) shared += a == b;
    if (shared != 3) continue;
    Icosian n1 = normal(f[j]);
    double c = (dot(n0, n1) / squared_norm(n0)).to_double();
    d.cell600_dihedral_deg = 180 - std::acos(c) * 180 / std::numbers::pi;
    break;
  }
  d.golden_deg = golden_rotation().degrees;
  d.acos_minus_quarter_deg = std::acos(-0.25) * 180 / std::numbers::pi;
  d.golden_plus_60 = std::abs(d.cell600_dihedral_deg - (d.golden_deg + 60)) < 1e-9;
  d.acos_quarter_plus_60 = std::abs(d.cell600_dihedral_deg - (d.acos_minus_quarter_deg + 60)) < 1e-9;
  return d;
}

}  // namespace qc
