// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "qc/analysis.hpp"
#include "qc/correspondence.hpp"
#include "qc/e8qc.hpp"
#include "qc/io.hpp"

using namespace qc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<Outcome()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = dt <= limit_s;
  bool ok = o.pass && in_time;
  failures += !ok;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f s / %.0f s", dt, limit_s);
  std::cout << (ok ? "PASS" : "FAIL") << "  " << id << ". " << title << ": " << o.detail << " [" << buf
            << (in_time ? "" : ", over time") << "]" << std::endl;
}

std::string cat(std::initializer_list<std::string> parts) {
  std::string s;
  for (auto& p : parts) s += (s.empty() ? "" : ", ") + p;
  return s;
}

std::string n(long v) { return std::to_string(v); }

CellSet fig_at(int extent) {
  TetragridOptions o;
  o.extent = extent;
  return fibonacci_icosagrid(fig_default_law(), o);
}

int sh(const std::string& cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::string qcforge = "./qcforge", work = "acceptance_out";
  app.add_option("--qcforge", qcforge, "path to the qcforge binary");
  app.add_option("--workdir", work, "scratch directory for determinism runs");
  CLI11_PARSE(app, argc, argv);

  const GoldenNum t = GoldenNum::tau();

  criterion(1, "Fibonacci gap word vs substitution word", 1, [&] {
    auto law = SpacingLaw::fibonacci();
    std::string w = fibonacci_word(law, 1000), s = substitution_word(1000);
    bool same = true;
    for (std::size_t len = 1; len <= 10; ++len) same &= factor_set(w, len) == factor_set(s, len);
    bool ratio = law.long_gap() / law.short_gap() == t;
    return Outcome{same && ratio, cat({"factor sets 1..10 " + std::string(same ? "equal" : "differ"),
                                        "L/S " + std::string(ratio ? "= tau exactly" : "!= tau")})};
  });

  criterion(2, "Penrose tiling from a pentagrid", 30, [&] {
    std::array<GoldenNum, 5> off = {GoldenNum::frac(1, 5), GoldenNum::frac(-17, 100), GoldenNum::frac(31, 100),
                                    GoldenNum::frac(-2, 25), GoldenNum::frac(11, 100)};
    ExactFrame f(5);
    auto g = pentagrid(off, false);
    Box2 box{-GoldenNum(6), GoldenNum(6), -GoldenNum(6), GoldenNum(6)};
    auto xs = grid_intersections(f, g, box);
    auto til = dual_tiling(f, g, box);
    auto chk = check_tiling(til);
    bool ok = xs.size() >= 500 && til.shapes.size() == 2 && til.cells.size() == xs.size() && chk.ok();
    return Outcome{ok, cat({n(xs.size()) + " intersections", n(til.cells.size()) + " cells",
                            n(til.shapes.size()) + " rhombus types", n(chk.overlapping_pairs) + " overlaps",
                            std::string("area ") + (chk.cell_area == chk.boundary_area ? "exact" : "mismatch")})};
  });

  criterion(3, "20G and evenly distributed cluster", 5, [&] {
    auto g = golden_composition(origin_star());
    auto e = evenly_distributed_cluster();
    std::size_t pg = plane_class_count(g), pe = plane_class_count(e);
    bool ok = g.cells.size() == 20 && g.points.size() == 61 && pg == 10 && pe == 70;
    return Outcome{ok, cat({n(g.cells.size()) + " tetrahedra", n(g.points.size()) + " vertices",
                            n(pg) + " plane classes", "even cluster " + n(pe) + " plane classes"})};
  });

  criterion(4, "FIG diagnostics at extent 4", 300, [&] {
    auto f = fig_at(4);
    // coordinates live in Z[tau] / 4; the frame scale is a fixed constant
    bool dir = true;
    for (auto& p : f.points)
      for (int i = 0; i < 3; ++i) dir &= dirichlet(GoldenNum(4) * p(i)).is_dirichlet;
    auto vc = vertex_configurations(f);
    auto z = find_20g(f);
    bool ok = dir && vc.direction_classes == 30 && vc.min_degree == 3 && vc.max_degree == 60 && z.size() >= 2;
    return Outcome{ok, cat({n(f.points.size()) + " points", std::string("4x all Dirichlet: ") + (dir ? "yes" : "no"),
                            n(vc.direction_classes) + " direction classes",
                            "degrees " + n(vc.min_degree) + ".." + n(vc.max_degree), n(z.size()) + " 20Gs"})};
  });

  criterion(5, "E8 roots and icosians", 60, [&] {
    auto roots = e8_roots();
    long half = 0;
    for (auto& r : roots) half += r.half_integer();
    auto& u = unit_icosians();
    std::set<Icosian, LexLess<Icosian>> us(u.begin(), u.end());
    bool closed = us.size() == 120;
    for (auto& a : u)
      for (auto& b : u) closed &= us.count(qmul(a, b)) == 1;
    std::set<Icosian, LexLess<Icosian>> img;
    bool norm1 = true, inverse = true;
    for (auto& r : roots) {
      Icosian q = e8_to_icosian(r.twice);
      norm1 &= euclid_norm(q) == GoldenNum(1);
      inverse &= icosian_to_e8(q) == r.twice;
      img.insert(q);
    }
    bool bij = norm1 && inverse && img.size() == 240;
    auto spec = projection_spec();
    bool idem = spec.Pi * spec.Pi == spec.Pi, sym = spec.Pi.transpose() == spec.Pi;
    int rank = exact_rank(spec.Pi);
    bool ok = roots.size() == 240 && half == 128 && closed && bij && idem && sym && rank == 4;
    return Outcome{ok, cat({n(roots.size()) + " roots (" + n(roots.size() - half) + "+" + n(half) + ")",
                            std::string("120 units closed: ") + (closed ? "yes" : "no"),
                            std::string("240 bijection: ") + (bij ? "yes" : "no"),
                            std::string("Pi idempotent/symmetric: ") + (idem && sym ? "yes" : "no"),
                            "rank " + n(rank)})};
  });

  criterion(6, "Elser-Sloane quasicrystal at shell 4", 300, [&] {
    auto qc = elser_sloane_points(projection_spec(), GoldenNum(4));
    bool units = true;
    for (auto& q : unit_icosians()) units &= qc.contains(q);
    auto cl = tau_closure(qc, 100, 20240101);
    auto cells = unit_600cells(qc);
    bool disjoint = true;
    for (std::size_t i = 0; i < cells.size(); ++i)
      for (std::size_t j = i + 1; j < cells.size(); ++j)
        disjoint &= !cells600_intersect(cells[i].center, cells[j].center);
    bool ok = units && cl.tested == 100 && cl.failures == 0 && disjoint;
    return Outcome{ok, cat({n(qc.points.size()) + " points", std::string("unit 600-cell present: ") + (units ? "yes" : "no"),
                            "tau-closure " + n(cl.tested - cl.failures) + "/" + n(cl.tested),
                            n(cells.size()) + " unit 600-cells detected" + (cells.size() < 2 ? " (pairwise check vacuous)" : ""),
                            std::string("non-intersecting: ") + (disjoint ? "yes" : "no")})};
  });

  criterion(7, "Cross-sections at shell 5", 120, [&] {
    auto qc = elser_sloane_points(projection_spec(), GoldenNum(5));
    auto s1 = cross_section(qc, SectionKind::type1), s2 = cross_section(qc, SectionKind::type2);
    int down = 0;
    for (auto& c : s1.cells.cells)
      if (c.orientation == Orientation::down && c.size == t * t &&
          std::any_of(c.v.begin(), c.v.end(), [](const Vec3& v) { return v.isZero(); }))
        ++down;
    int centered = 0;
    for (auto& c : s2.cells.cells) centered += centroid(c).isZero() && c.size == s2.unit_size;
    GoldenNum r2 = std::min(s1.complete_r2, s2.complete_r2);
    long c1 = 0, c2 = 0;
    for (auto& p : s1.cells.points) c1 += squared_norm(p) <= r2;
    for (auto& p : s2.cells.points) c2 += squared_norm(p) <= r2;
    bool ok = down == 4 && centered == 1 && c1 > c2;
    return Outcome{ok, cat({"type I central tau-edge cluster " + n(down) + " tetrahedra",
                            "type II centered unit tetrahedra " + n(centered),
                            "points on common window I " + n(c1) + " vs II " + n(c2)})};
  });

  criterion(8, "CQC-II in CQC-I in FIG, enrich", 600, [&] {
    auto qc = elser_sloane_points(projection_spec(), GoldenNum(5));
    auto cq1 = compound_qc(cross_section(qc, SectionKind::type1));
    auto cq2 = compound_qc(cross_section(qc, SectionKind::type2));
    auto fig = fig_at(5);
    auto a = align_and_subset_check(cq2, cq1), b = align_and_subset_check(cq1, fig),
         c = align_and_subset_check(fig, cq1);
    auto e = enrich(cq1);
    TetragridOptions o;
    o.window_r2 = cq1.provenance.window_r2;
    auto f = fibonacci_icosagrid(fig_default_law(), o);
    bool eq = e.points == f.points, idem = enrich(e).points == e.points;
    bool ok = a.subset && a.unmatched.empty() && b.subset && b.unmatched.empty() && !c.subset && !c.unmatched.empty() &&
              eq && idem;
    return Outcome{ok, cat({"II in I: " + a.verdict() + " (" + n(a.matched) + " matched)",
                            "I in FIG: " + b.verdict() + " (" + n(b.matched) + " matched)",
                            "FIG in I: " + c.verdict() + " (" + n(c.unmatched_count) + " witnesses)",
                            std::string("enrich(I) = FIG: ") + (eq ? "yes" : "no"),
                            std::string("idempotent: ") + (idem ? "yes" : "no")})};
  });

  criterion(9, "Convergence sweep", 120, [&] {
    auto s = convergence_sweep(64);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
      if (s[i].metric < s[arg].metric) arg = i;
    char buf[160];
    std::snprintf(buf, sizeof buf, "argmin %zu of 64 at %.4f deg, min %.3g, at 0: %.4g", arg,
                  s[arg].angle * 180 / std::numbers::pi, s[arg].metric, s.front().metric);
    bool ok = arg == s.size() - 1 && s[arg].metric <= 1e-9 && s.front().metric > 0;
    return Outcome{ok, buf};
  });

  criterion(10, "Diffraction", 300, [&] {
    auto pts = float_points(fig_at(4).points);
    Eigen::Vector3d ax = to_double(fivefold_axis());
    double rms = rotation_rms(pts, ax, 12.0, 256, 2 * std::numbers::pi / 5);
    // FCC control down [001]: peaks at 4 pi (m, n)
    std::vector<Eigen::Vector3d> fcc;
    for (int x = -8; x <= 8; ++x)
      for (int y = -8; y <= 8; ++y)
        for (int z = -8; z <= 8; ++z)
          if ((x + y + z) % 2 == 0) fcc.emplace_back(x / 2.0, y / 2.0, z / 2.0);
    auto img = diffraction_image(fcc, {0, 0, 1}, 14.0, 256);
    double n2 = static_cast<double>(fcc.size()) * fcc.size(), cell = img.extent / (img.resolution / 2);
    int peaks = 0, off = 0;
    for (int iu = 1; iu + 1 < img.resolution; ++iu)
      for (int iv = 1; iv + 1 < img.resolution; ++iv) {
        double c = img.at(iu, iv);
        if (c < 0.25 * n2) continue;
        bool peak = true;
        for (int du = -1; du <= 1; ++du)
          for (int dv = -1; dv <= 1; ++dv)
            if ((du || dv) && img.at(iu + du, iv + dv) > c) peak = false;
        if (!peak) continue;
        ++peaks;
        Eigen::Vector3d k = img.k_at(iu) * img.u + img.k_at(iv) * img.v;
        double fx = 4 * std::numbers::pi * std::round(k(0) / (4 * std::numbers::pi));
        double fy = 4 * std::numbers::pi * std::round(k(1) / (4 * std::numbers::pi));
        off += std::abs(k(0) - fx) > cell || std::abs(k(1) - fy) > cell;
      }
    char buf[200];
    std::snprintf(buf, sizeof buf, "FIG N=%zu 5-fold 72 deg RMS %.3g (forward peak excluded), FCC %d peaks, %d off-lattice",
                  pts.size(), rms, peaks, off);
    bool ok = pts.size() <= 20000 && rms <= 0.02 && peaks == 9 && off == 0;
    return Outcome{ok, buf};
  });

  criterion(11, "Determinism across threads and manifest replay", 600, [&] {
    fs::remove_all(work);
    struct Job {
      std::string args, stem;
    };
    std::vector<Job> jobs = {{"generate fig --extent 3 --formats json,xyz,csv,obj", "fig"},
                             {"generate cqc --kind type2", "cqc"},
                             {"generate penrose --patch 4", "penrose"},
                             {"analyze diffraction --extent 3 --resolution 64", "diffraction"},
                             {"verify sweep --steps 16", "sweep"}};
    std::vector<std::string> bad;
    int files = 0;
    for (auto& j : jobs) {
      std::string a = work + "/a", b = work + "/b", c = work + "/c";
      if (sh(qcforge + " --threads 1 " + j.args + " --out " + a) != 0) {
        bad.push_back(j.stem + " (run failed)");
        continue;
      }
      sh(qcforge + " --threads 4 " + j.args + " --out " + b);
      int rc = sh(qcforge + " --threads 2 replay " + a + "/" + j.stem + ".manifest.json --out " + c);
      auto m = io::json::parse(io::read_file(a + "/" + j.stem + ".manifest.json"));
      for (auto& o : m["outputs"]) {
        std::string f = o["file"].get<std::string>();
        std::string x = io::read_file(a + "/" + f);
        bool same = fs::exists(b + "/" + f) && fs::exists(c + "/" + f) && io::read_file(b + "/" + f) == x &&
                    io::read_file(c + "/" + f) == x;
        ++files;
        if (!same) bad.push_back(f);
      }
      if (rc != 0) bad.push_back(j.stem + " (replay mismatch)");
    }
    std::string detail = n(files) + " artifacts from " + n(jobs.size()) + " pipelines byte-identical at 1/4 threads and on replay";
    if (!bad.empty()) {
      detail = "differing: ";
      for (auto& b : bad) detail += b + " ";
    }
    return Outcome{bad.empty() && files > 0, detail};
  });

  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all 11 criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
