#include "qc/multigrid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <unordered_map>

namespace qc {

SpacingLaw SpacingLaw::periodic(GoldenNum T, GoldenNum gamma) {
  SpacingLaw l;
  l.kind = Kind::periodic;
  l.T = std::move(T);
  l.gamma = std::move(gamma);
  return l;
}

SpacingLaw SpacingLaw::fibonacci(GoldenNum alpha, GoldenNum beta, GoldenNum T) {
  SpacingLaw l;
  l.kind = Kind::quasiperiodic;
  l.T = std::move(T);
  l.alpha = std::move(alpha);
  l.beta = std::move(beta);
  return l;
}

void SpacingLaw::validate() const {
  if (T.sign() <= 0) throw Error("BadSpacing", "grid period T must be positive");
  if (kind == Kind::quasiperiodic) {
    if (mu.sign() <= 0 || rho.sign() <= 0) throw Error("BadSpacing", "mu and rho must be positive");
    if (mu.is_rational()) throw Error("RationalMu", "mu must be irrational for the quasiperiodic law");
  }
}

GoldenNum SpacingLaw::offset(long n) const {
  if (kind == Kind::periodic) return T * (GoldenNum(n) + gamma);
  GoldenNum f = GoldenNum(n) / mu + beta;
  GoldenNum k(mpq_class(f.floor()));
  return T * (GoldenNum(n) + alpha + k / rho);
}

GoldenNum SpacingLaw::short_gap() const { return T; }

GoldenNum SpacingLaw::long_gap() const {
  if (kind == Kind::periodic) return T;
  return T * (GoldenNum(1) + GoldenNum(1) / rho);
}

long SpacingLaw::index_at_or_below(const GoldenNum& x) const {
  long n;
  if (kind == Kind::periodic) {
    n = (x / T - gamma).floor().get_si();
  } else {
    double mean = 1.0 + 1.0 / (rho.to_double() * mu.to_double());
    n = static_cast<long>(std::floor(((x / T).to_double() - alpha.to_double()) / mean));
  }
  while (offset(n) > x) --n;
  while (offset(n + 1) <= x) ++n;
  return n;
}

bool SpacingLaw::contains(const GoldenNum& x) const { return offset(index_at_or_below(x)) == x; }

std::vector<GoldenNum> grid_offsets(const SpacingLaw& law, long n_lo, long n_hi) {
  if (n_lo > n_hi) throw Error("BadRange", "n_lo > n_hi");
  law.validate();
  std::vector<GoldenNum> r;
  r.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));
  for (long n = n_lo; n <= n_hi; ++n) r.push_back(law.offset(n));
  return r;
}

std::string fibonacci_word(const SpacingLaw& law, std::size_t count) {
  law.validate();
  if (law.kind != SpacingLaw::Kind::quasiperiodic) throw Error("BadSpacing", "word needs the quasiperiodic law");
  GoldenNum S = law.short_gap(), L = law.long_gap();
  std::string w;
  w.reserve(count);
  GoldenNum prev = law.offset(0);
  for (std::size_t n = 1; n <= count; ++n) {
    GoldenNum cur = law.offset(static_cast<long>(n));
    GoldenNum g = cur - prev;
    if (g == S)
      w += 'S';
    else if (g == L)
      w += 'L';
    else
      throw Error("BadSpacing", "gap is neither S nor L: " + g.str());
    prev = std::move(cur);
  }
  return w;
}

std::string substitution_word(std::size_t count) {
  std::string w = "L";
  while (w.size() < count) {
    std::string n;
    n.reserve(w.size() * 2);
    for (char ch : w) n += ch == 'L' ? "LS" : "L";
    w = std::move(n);
  }
  w.resize(count);
  return w;
}

std::set<std::string> factor_set(const std::string& w, std::size_t len) {
  std::set<std::string> f;
  for (std::size_t i = 0; i + len <= w.size(); ++i) f.insert(w.substr(i, len));
  return f;
}

std::vector<Eigen::Vector2d> multigrid_normals(int n_families) {
  if (n_families < 2) throw Error("BadFamilies", "need at least two families");
  std::vector<Eigen::Vector2d> r;
  for (int k = 0; k < n_families; ++k) {
    double t = 2 * std::numbers::pi * k / n_families;
    r.emplace_back(std::cos(t), std::sin(t));
  }
  return r;
}

ExactFrame::ExactFrame(int n_families) : n(n_families) {
  GoldenNum c1;
  switch (n) {
    case 3: c1 = GoldenNum::frac(-1, 2); break;
    case 4: c1 = 0; break;
    case 5: c1 = GoldenNum::sigma() / 2; break;
    case 6: c1 = GoldenNum::frac(1, 2); break;
    case 10: c1 = GoldenNum::tau() / 2; break;
    default: throw Error("BadFamilies", "exact frame supports n in {3,4,5,6,10}");
  }
  // Chebyshev: cos(k t) = T_k(c1), sin(k t)/sin(t) = U_{k-1}(c1)
  GoldenNum t0 = 1, t1 = c1, u0 = 0, u1 = 1;
  for (int k = 0; k < n; ++k) {
    c.push_back(t0);
    s.push_back(u0);
    GoldenNum t2 = 2 * c1 * t1 - t0, u2 = 2 * c1 * u1 - u0;
    t0 = t1;
    t1 = t2;
    u0 = u1;
    u1 = u2;
  }
  kappa2 = GoldenNum(1) - c1 * c1;
  kappa = std::sqrt(kappa2.to_double());
}

namespace {

struct Range {
  long lo, hi;
};

// line indices of family whose lines meet the box
Range box_range(const ExactFrame& f, const GridFamily& g, const Box2& b) {
  std::array<Vec2, 4> corners = {Vec2(b.x0, b.y0), Vec2(b.x1, b.y0), Vec2(b.x0, b.y1), Vec2(b.x1, b.y1)};
  GoldenNum mn = f.project(corners[0], g.normal_index), mx = mn;
  for (auto& p : corners) {
    GoldenNum v = f.project(p, g.normal_index);
    if (v < mn) mn = v;
    if (v > mx) mx = v;
  }
  long lo = g.law.index_at_or_below(mn);
  if (g.law.offset(lo) < mn) ++lo;
  long hi = g.law.index_at_or_below(mx);
  return {std::max(lo, g.n_lo), std::min(hi, g.n_hi)};
}

bool solve2(const Vec2& n1, const GoldenNum& d1, const Vec2& n2, const GoldenNum& d2, Vec2& out) {
  GoldenNum det = n1(0) * n2(1) - n1(1) * n2(0);
  if (det.is_zero()) return false;
  out(0) = (d1 * n2(1) - d2 * n1(1)) / det;
  out(1) = (n1(0) * d2 - n2(0) * d1) / det;
  return true;
}

int angle_class(int n, int j, int k) {
  int d = std::abs(j - k) % n;
  return std::min(d, n - d);
}

}  // namespace

std::vector<Intersection> grid_intersections(const ExactFrame& frame, const std::vector<GridFamily>& grid,
                                             const Box2& patch) {
  for (auto& g : grid) g.law.validate();
  std::vector<Range> ranges;
  for (auto& g : grid) ranges.push_back(box_range(frame, g, patch));
  std::vector<Intersection> out;
  const int F = static_cast<int>(grid.size());
  for (int j = 0; j < F; ++j)
    for (int k = j + 1; k < F; ++k) {
      Vec2 nj = frame.normal(grid[j].normal_index), nk = frame.normal(grid[k].normal_index);
      for (long a = ranges[j].lo; a <= ranges[j].hi; ++a) {
        GoldenNum xa = grid[j].law.offset(a);
        for (long b = ranges[k].lo; b <= ranges[k].hi; ++b) {
          Vec2 p;
          if (!solve2(nj, xa, nk, grid[k].law.offset(b), p))
            throw Error("DegenerateGrid", "parallel families in grid");
          if (!patch.contains(p)) continue;
          for (int m = 0; m < F; ++m) {
            if (m == j || m == k) continue;
            if (grid[m].law.contains(frame.project(p, grid[m].normal_index)))
              throw Error("DegenerateGrid", "three lines meet at one point; perturb the offsets");
          }
          Intersection x;
          x.point = p;
          x.family = {j, k};
          x.line = {a, b};
          x.angle_class = angle_class(frame.n, grid[j].normal_index, grid[k].normal_index);
          out.push_back(std::move(x));
        }
      }
    }
  return out;
}

Vec2 dual_vertex(const ExactFrame& frame, const std::vector<GridFamily>& grid, const Intersection& x, int dj,
                 int dk) {
  Vec2 v(0, 0);
  for (int m = 0; m < static_cast<int>(grid.size()); ++m) {
    long K;
    if (m == x.family[0])
      K = x.line[0] + dj;
    else if (m == x.family[1])
      K = x.line[1] + dk;
    else
      K = grid[m].law.index_at_or_below(frame.project(x.point, grid[m].normal_index)) + 1;
    v += GoldenNum(K) * frame.edge(grid[m].normal_index);
  }
  return v;
}

namespace {

GoldenNum cross(const Vec2& a, const Vec2& b) { return a(0) * b(1) - a(1) * b(0); }

RhombusCell make_cell(const ExactFrame& frame, const std::vector<GridFamily>& grid, const Intersection& x,
                      const Vec2& base) {
  RhombusCell c;
  Vec2 ej = frame.edge(grid[x.family[0]].normal_index), ek = frame.edge(grid[x.family[1]].normal_index);
  c.loop = {base, Vec2(base + ej), Vec2(base + ej + ek), Vec2(base + ek)};
  if (cross(ej, ek).sign() < 0) std::swap(c.loop[1], c.loop[3]);
  c.family = x.family;
  c.line = x.line;
  return c;
}

}  // namespace

Tiling dual_tiling(const ExactFrame& frame, const std::vector<GridFamily>& grid, const Box2& patch) {
  std::vector<Intersection> xs = grid_intersections(frame, grid, patch);
  Tiling t;
  const int n = static_cast<int>(xs.size());
  if (n == 0) return t;

  // consecutive intersections along each clipped line
  std::map<std::pair<int, long>, std::vector<int>> on_line;
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < 2; ++s) on_line[{xs[i].family[s], xs[i].line[s]}].push_back(i);
  struct Nb {
    int other;
    int family;
    long line;
  };
  std::vector<std::vector<Nb>> nbrs(n);
  for (auto& [key, ids] : on_line) {
    std::sort(ids.begin(), ids.end(), [&](int a, int b) { return lex_cmp(xs[a].point, xs[b].point) < 0; });
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
      nbrs[ids[i]].push_back({ids[i + 1], key.first, key.second});
      nbrs[ids[i + 1]].push_back({ids[i], key.first, key.second});
      t.adjacency.push_back({ids[i], ids[i + 1], key.first, key.second});
    }
  }

  auto above = [&](const Vec2& p, int fam, long line) {
    return frame.project(p, grid[fam].normal_index) > grid[fam].law.offset(line);
  };
  auto edge_of = [&](int fam) { return frame.edge(grid[fam].normal_index); };

  // breadth-first, each new cell placed by its shared edge
  std::vector<std::optional<Vec2>> base(n);
  for (int seed = 0; seed < n; ++seed) {
    if (base[seed]) continue;
    ++t.components;
    base[seed] = dual_vertex(frame, grid, xs[seed], 0, 0);
    std::queue<int> q;
    q.push(seed);
    while (!q.empty()) {
      int p = q.front();
      q.pop();
      for (const Nb& nb : nbrs[p]) {
        if (base[nb.other]) continue;
        const Intersection& P = xs[p];
        const Intersection& Q = xs[nb.other];
        int kP = P.family[0] == nb.family ? 1 : 0;  // the other family at P
        int kQ = Q.family[0] == nb.family ? 1 : 0;
        Vec2 v = *base[p];
        if (above(Q.point, P.family[kP], P.line[kP])) v += edge_of(P.family[kP]);
        if (above(P.point, Q.family[kQ], Q.line[kQ])) v -= edge_of(Q.family[kQ]);
        base[nb.other] = v;
        q.push(nb.other);
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    RhombusCell c = make_cell(frame, grid, xs[i], *base[i]);
    // shape from the real angle between the two edge directions
    int a = grid[c.family[0]].normal_index, b = grid[c.family[1]].normal_index;
    GoldenNum cosang = (frame.c[a] * frame.c[b] + frame.kappa2 * frame.s[a] * frame.s[b]).abs();
    auto it = std::find(t.shapes.begin(), t.shapes.end(), cosang);
    if (it == t.shapes.end()) {
      t.shapes.push_back(cosang);
      it = t.shapes.end() - 1;
    }
    c.shape = static_cast<int>(it - t.shapes.begin());
    t.cells.push_back(std::move(c));
  }
  for (auto& s : t.shapes) {
    double deg = std::acos(s.to_double()) * 180 / std::numbers::pi;
    std::string name = std::to_string(static_cast<int>(std::lround(deg))) + "deg";
    if (frame.n == 5) name = deg < 45 ? "oblate" : "prolate";
    t.shape_names.push_back(name);
  }
  return t;
}

namespace {

GoldenNum loop_area2(const std::vector<Vec2>& loop) {
  GoldenNum a;
  for (std::size_t i = 0; i < loop.size(); ++i) a += cross(loop[i], loop[(i + 1) % loop.size()]);
  return a;
}

bool interiors_overlap(const RhombusCell& x, const RhombusCell& y) {
  auto separated = [&](const Vec2& axis) {
    GoldenNum xmin = dot(axis, x.loop[0]), xmax = xmin, ymin = dot(axis, y.loop[0]), ymax = ymin;
    for (int i = 1; i < 4; ++i) {
      GoldenNum u = dot(axis, x.loop[i]), v = dot(axis, y.loop[i]);
      if (u < xmin) xmin = u;
      if (u > xmax) xmax = u;
      if (v < ymin) ymin = v;
      if (v > ymax) ymax = v;
    }
    return xmax <= ymin || ymax <= xmin;
  };
  for (const RhombusCell* c : {&x, &y})
    for (int i = 0; i < 2; ++i) {
      Vec2 e = c->loop[i + 1] - c->loop[i];
      if (separated(Vec2(-e(1), e(0)))) return false;
    }
  return true;
}

}  // namespace

TilingCheck check_tiling(const Tiling& t) {
  TilingCheck r;
  const std::size_t n = t.cells.size();
  // sweep on float x-extent to find candidate pairs, exact test after
  std::vector<std::pair<double, double>> ext(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lo = 1e300, hi = -1e300;
    for (auto& p : t.cells[i].loop) {
      double v = p(0).to_double();
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    ext[i] = {lo - 1e-9, hi + 1e-9};
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ext[a].first < ext[b].first; });
  for (std::size_t ii = 0; ii < n; ++ii)
    for (std::size_t jj = ii + 1; jj < n && ext[order[jj]].first <= ext[order[ii]].second; ++jj)
      if (interiors_overlap(t.cells[order[ii]], t.cells[order[jj]])) ++r.overlapping_pairs;

  std::unordered_map<Vec2, std::size_t, VecHash<Vec2>, VecEq<Vec2>> vid;
  std::vector<Vec2> verts;
  auto id = [&](const Vec2& p) {
    auto [it, fresh] = vid.emplace(p, verts.size());
    if (fresh) verts.push_back(p);
    return it->second;
  };
  std::map<std::pair<std::size_t, std::size_t>, int> uses;
  std::map<std::pair<std::size_t, std::size_t>, bool> dir;  // directed edge a->b seen
  for (auto& c : t.cells) {
    r.cell_area += loop_area2({c.loop.begin(), c.loop.end()});
    for (int i = 0; i < 4; ++i) {
      std::size_t a = id(c.loop[i]), b = id(c.loop[(i + 1) % 4]);
      ++uses[{std::min(a, b), std::max(a, b)}];
      dir[{a, b}] = true;
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> next;  // boundary, oriented as in the cells
  for (auto& [e, k] : uses) {
    if (k > 2) ++r.bad_edges;
    if (k != 1) continue;
    if (dir.count({e.first, e.second}))
      next[e.first].push_back(e.second);
    else
      next[e.second].push_back(e.first);
  }
  std::set<std::size_t> seen;
  for (auto& [start, outs] : next) {
    if (seen.count(start)) continue;
    std::vector<Vec2> loop;
    std::size_t cur = start;
    while (!seen.count(cur)) {
      seen.insert(cur);
      loop.push_back(verts[cur]);
      auto& o = next[cur];
      if (o.size() != 1) {
        ++r.bad_edges;  // pinched boundary
        break;
      }
      cur = o[0];
    }
    ++r.boundary_loops;
    r.boundary_area += loop_area2(loop);
  }
  r.cell_area /= 2;
  r.boundary_area /= 2;
  return r;
}

std::vector<GridFamily> pentagrid(const std::array<GoldenNum, 5>& offsets, bool fibonacci) {
  std::vector<GridFamily> g;
  for (int m = 0; m < 5; ++m) {
    GridFamily f;
    f.normal_index = m;
    f.law = fibonacci ? SpacingLaw::fibonacci(offsets[m], 0) : SpacingLaw::periodic(1, offsets[m]);
    g.push_back(std::move(f));
  }
  return g;
}

}  // namespace qc
