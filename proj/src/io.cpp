#include "qc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qc::io {

namespace fs = std::filesystem;

// ---- exact values

json to_json(const GoldenNum& x) { return json::array({x.a().get_str(), x.b().get_str()}); }

GoldenNum golden_from_json(const json& j) {
  try {
    if (j.is_array() && j.size() == 2) {
      mpq_class a(j[0].get<std::string>()), b(j[1].get<std::string>());
      return {a, b};
    }
    if (j.is_string()) return GoldenNum::parse(j.get<std::string>());
    if (j.is_number_integer()) return GoldenNum(j.get<long>());
  } catch (const std::exception&) {
  }
  throw Error("BadJson", "not an exact golden value: " + j.dump());
}

namespace {

template <typename V>
json vec_json(const V& v) {
  json r = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) r.push_back(to_json(v(i)));
  return r;
}

template <typename V>
V vec_from(const json& j) {
  V v;
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != v.size())
    throw Error("BadJson", "expected " + std::to_string(v.size()) + " coordinates");
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = golden_from_json(j[i]);
  return v;
}

const char* name(Orientation o) { return o == Orientation::down ? "down" : "up"; }
const char* name(Chirality c) {
  switch (c) {
    case Chirality::left:
      return "left";
    case Chirality::right:
      return "right";
    default:
      return "both";
  }
}

}  // namespace

json to_json(const Vec3& v) { return vec_json(v); }
json to_json(const Vec4& v) { return vec_json(v); }
Vec3 vec3_from_json(const json& j) { return vec_from<Vec3>(j); }
Vec4 vec4_from_json(const json& j) { return vec_from<Vec4>(j); }

json to_json(const CellSet& s) {
  std::map<Vec3, int, LexLess<Vec3>> idx;
  json pts = json::array();
  for (auto& p : s.points) {
    idx.emplace(p, static_cast<int>(idx.size()));
    pts.push_back(to_json(p));
  }
  json cells = json::array();
  for (auto& c : s.cells) {
    json v = json::array();
    for (auto& p : c.v) {
      auto it = idx.find(p);
      if (it == idx.end()) throw Error("BadCellSet", "cell vertex missing from point list");
      v.push_back(it->second);
    }
    cells.push_back({{"v", v},
                     {"orientation", name(c.orientation)},
                     {"grid", c.grid_id},
                     {"chirality", name(c.chirality)},
                     {"size", to_json(c.size)}});
  }
  return {{"type", "cellset"},
          {"kind", s.provenance.kind},
          {"window_r2", to_json(s.provenance.window_r2)},
          {"params", s.provenance.params},
          {"points", pts},
          {"cells", cells}};
}

CellSet cellset_from_json(const json& j) {
  if (!j.is_object() || j.value("type", "") != "cellset") throw Error("BadJson", "not a cell set document");
  CellSet s;
  s.provenance.kind = j.at("kind").get<std::string>();
  s.provenance.window_r2 = golden_from_json(j.at("window_r2"));
  s.provenance.params = j.at("params").get<std::map<std::string, std::string>>();
  for (auto& p : j.at("points")) s.points.push_back(vec3_from_json(p));
  for (auto& c : j.at("cells")) {
    TetraCell t;
    for (int i = 0; i < 4; ++i) {
      auto k = c.at("v").at(i).get<std::size_t>();
      if (k >= s.points.size()) throw Error("BadJson", "cell vertex index out of range");
      t.v[i] = s.points[k];
    }
    auto o = c.at("orientation").get<std::string>();
    if (o != "down" && o != "up") throw Error("BadJson", "bad orientation " + o);
    t.orientation = o == "down" ? Orientation::down : Orientation::up;
    t.grid_id = c.at("grid").get<int>();
    auto ch = c.at("chirality").get<std::string>();
    t.chirality = ch == "left" ? Chirality::left : ch == "right" ? Chirality::right : Chirality::both;
    t.size = golden_from_json(c.at("size"));
    s.cells.push_back(std::move(t));
  }
  s.finalize();
  return s;
}

json to_json(const Tiling& t, const ExactFrame& frame) {
  json shapes = json::array();
  for (std::size_t i = 0; i < t.shapes.size(); ++i)
    shapes.push_back({{"name", t.shape_names[i]}, {"abs_cos", to_json(t.shapes[i])}});
  json cells = json::array();
  for (auto& c : t.cells) {
    json loop = json::array(), xy = json::array();
    for (auto& p : c.loop) {
      loop.push_back(vec_json(p));
      auto r = frame.to_real(p);
      xy.push_back({r(0), r(1)});
    }
    cells.push_back({{"loop", loop},
                     {"xy", xy},
                     {"shape", t.shape_names[c.shape]},
                     {"family", c.family},
                     {"line", c.line}});
  }
  json adj = json::array();
  for (auto& a : t.adjacency) adj.push_back({a.a, a.b, a.family, a.line});
  return {{"type", "tiling"},
          {"families", frame.n},
          {"frame", "X = x, Y = y kappa, kappa^2 = " + frame.kappa2.str()},
          {"shapes", shapes},
          {"cells", cells},
          {"adjacency", adj},
          {"components", t.components}};
}

json to_json(const QC4& qc) {
  json pts = json::array(), lat = json::array();
  for (auto& p : qc.points) pts.push_back(to_json(p));
  for (auto& l : qc.lattice) lat.push_back(l);
  return {{"type", "qc4"},
          {"window", qc.window == WindowKind::ball ? "ball" : "voronoi_approx"},
          {"shell2", to_json(qc.shell2)},
          {"window_r2", to_json(qc.window_r2)},
          {"complete_q2", to_json(qc.complete_q2)},
          {"points", pts},
          {"lattice_twice", lat}};
}

std::vector<Vec4> qc4_points_from_json(const json& j) {
  std::vector<Vec4> r;
  for (auto& p : j.at("points")) r.push_back(vec4_from_json(p));
  return r;
}

json to_json(const AlignmentReport& r) {
  json w = json::array();
  for (auto& p : r.unmatched) w.push_back(to_json(p));
  json rot = json::array();
  for (int i = 0; i < 3; ++i) rot.push_back(vec_json(Vec3(r.rotation.row(i).transpose())));
  return {{"type", "alignment"},
          {"verdict", r.verdict()},
          {"scale", to_json(r.scale)},
          {"rotation", rot},
          {"translation", to_json(r.translation)},
          {"window_r2", to_json(r.window_r2)},
          {"matched", r.matched},
          {"unmatched_count", r.unmatched_count},
          {"witnesses", w}};
}

json to_json(const VertexCensus& c) {
  json dirs = json::array();
  for (auto& d : c.directions) dirs.push_back(to_json(d));
  json census = json::array();
  for (auto& [star, n] : c.census) census.push_back({{"star", star}, {"degree", star.size()}, {"count", n}});
  std::map<int, long> degrees;
  for (auto& v : c.vertices) ++degrees[v.degree];
  json deg = json::object();
  for (auto& [d, n] : degrees) deg[std::to_string(d)] = n;
  return {{"type", "vertex_census"},
          {"edge2", to_json(c.edge2)},
          {"directions", dirs},
          {"direction_classes", c.direction_classes},
          {"symmetry_order", c.symmetry_order},
          {"vertices", c.vertices.size()},
          {"configurations", c.census.size()},
          {"min_degree", c.min_degree},
          {"max_degree", c.max_degree},
          {"degree_histogram", deg},
          {"census", census}};
}

json to_json(const CrossingCatalog& c) {
  json census = json::array();
  for (auto& [k, n] : c.census) census.push_back({{"p", to_json(k.first)}, {"q", to_json(k.second)}, {"count", n}});
  std::vector<Vec3> pts;
  for (auto& x : c.crossings) pts.push_back(x.point);
  std::sort(pts.begin(), pts.end(), LexLess<Vec3>());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return {{"type", "edge_crossings"},
          {"edges", c.edges.size()},
          {"crossings", c.crossings.size()},
          {"crossing_points", pts.size()},
          {"dirichlet_scale", dirichlet_scale(pts)},
          {"classes", c.census.size()},
          {"census", census}};
}

json to_json(const std::vector<PlaneClass>& pc) {
  json cls = json::array();
  std::size_t planes = 0;
  for (auto& c : pc) {
    json off = json::array();
    for (auto& o : c.offsets) off.push_back(to_json(o));
    planes += c.offsets.size();
    cls.push_back({{"normal", to_json(c.normal)}, {"offsets", off}});
  }
  return {{"type", "plane_classes"}, {"count", pc.size()}, {"planes", planes}, {"classes", cls}};
}

// ---- point files

PointFormat parse_point_format(const std::string& s) {
  if (s == "xyz") return PointFormat::xyz;
  if (s == "csv") return PointFormat::csv;
  if (s == "json") return PointFormat::json;
  if (s == "obj") return PointFormat::obj;
  throw Error("UnsupportedFormat", "unsupported point format '" + s + "'");
}

std::string to_string(PointFormat f) {
  switch (f) {
    case PointFormat::xyz:
      return "xyz";
    case PointFormat::csv:
      return "csv";
    case PointFormat::json:
      return "json";
    default:
      return "obj";
  }
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0 ? 0.0 : x);
  return buf;
}

namespace {

template <typename V>
std::string format_any(std::vector<V> pts, PointFormat f) {
  if (pts.empty()) throw Error("EmptyPointSet", "cannot export an empty point set");
  std::sort(pts.begin(), pts.end(), LexLess<V>());
  const int d = static_cast<int>(V::RowsAtCompileTime);
  static const char* axis = "xyzw";
  std::ostringstream o;
  auto floats = [&](const V& p, const char* sep) {
    for (int i = 0; i < d; ++i) o << (i ? sep : "") << fmt17(p(i).to_double());
  };
  switch (f) {
    case PointFormat::xyz:
      o << pts.size() << "\n" << d << "D points\n";
      for (auto& p : pts) {
        o << "X ";
        floats(p, " ");
        o << "\n";
      }
      break;
    case PointFormat::csv:
      for (int i = 0; i < d; ++i) o << (i ? "," : "") << axis[i];
      for (int i = 0; i < d; ++i) o << "," << axis[i] << "_a," << axis[i] << "_b";
      o << "\n";
      for (auto& p : pts) {
        floats(p, ",");
        for (int i = 0; i < d; ++i) o << "," << p(i).a().get_str() << "," << p(i).b().get_str();
        o << "\n";
      }
      break;
    case PointFormat::obj:
      if (d != 3) throw Error("UnsupportedFormat", "obj needs 3D points");
      for (auto& p : pts) {
        o << "v ";
        floats(p, " ");
        o << "\n";
      }
      break;
    case PointFormat::json: {
      json a = json::array();
      for (auto& p : pts) a.push_back(vec_json(p));
      o << dump({{"type", "points"}, {"dim", d}, {"points", a}});
      break;
    }
  }
  return o.str();
}

}  // namespace

std::string format_points(std::vector<Vec3> pts, PointFormat f) { return format_any(std::move(pts), f); }
std::string format_points(std::vector<Vec4> pts, PointFormat f) { return format_any(std::move(pts), f); }

std::vector<Vec3> points3_from_json(const json& j) {
  std::vector<Vec3> r;
  for (auto& p : j.at("points")) r.push_back(vec3_from_json(p));
  return r;
}

std::string cellset_obj(const CellSet& s) {
  if (s.cells.empty()) throw Error("EmptyPointSet", "cannot export a mesh without cells");
  std::map<Vec3, int, LexLess<Vec3>> idx;
  for (auto& p : s.points) idx.emplace(p, static_cast<int>(idx.size()) + 1);
  std::ostringstream o;
  o << "# " << s.cells.size() << " tetrahedra\n";
  for (auto& p : s.points) o << "v " << fmt17(p(0).to_double()) << " " << fmt17(p(1).to_double()) << " "
                             << fmt17(p(2).to_double()) << "\n";
  for (auto& c : s.cells) {
    int v[4];
    for (int i = 0; i < 4; ++i) v[i] = idx.at(c.v[i]);
    o << "f " << v[0] << " " << v[1] << " " << v[2] << "\n"
      << "f " << v[0] << " " << v[3] << " " << v[1] << "\n"
      << "f " << v[0] << " " << v[2] << " " << v[3] << "\n"
      << "f " << v[1] << " " << v[3] << " " << v[2] << "\n";
  }
  return o.str();
}

std::string tiling_svg(const Tiling& t, const ExactFrame& frame) {
  if (t.cells.empty()) throw Error("EmptyPointSet", "cannot draw an empty tiling");
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  std::vector<std::array<Eigen::Vector2d, 4>> loops;
  for (auto& c : t.cells) {
    std::array<Eigen::Vector2d, 4> l;
    for (int i = 0; i < 4; ++i) {
      l[i] = frame.to_real(c.loop[i]);
      x0 = std::min(x0, l[i](0));
      x1 = std::max(x1, l[i](0));
      y0 = std::min(y0, l[i](1));
      y1 = std::max(y1, l[i](1));
    }
    loops.push_back(l);
  }
  static const char* fill[] = {"#e8a33d", "#3d7be8", "#5cb85c", "#d9534f", "#9b59b6", "#7f8c8d"};
  char buf[128];
  std::ostringstream o;
  std::snprintf(buf, sizeof buf, "%.4f %.4f %.4f %.4f", x0 - 0.5, -y1 - 0.5, x1 - x0 + 1, y1 - y0 + 1);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << buf << "\">\n";
  for (std::size_t k = 0; k < loops.size(); ++k) {
    o << "<polygon points=\"";
    for (int i = 0; i < 4; ++i) {
      std::snprintf(buf, sizeof buf, "%s%.5f,%.5f", i ? " " : "", loops[k][i](0), -loops[k][i](1));
      o << buf;
    }
    o << "\" fill=\"" << fill[t.cells[k].shape % 6] << "\" stroke=\"#222\" stroke-width=\"0.03\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string diffraction_pgm(const DiffractionImage& img) {
  double mx = 0;
  for (double x : img.intensity) mx = std::max(mx, x);
  std::string out = "P5\n" + std::to_string(img.resolution) + " " + std::to_string(img.resolution) + "\n65535\n";
  for (double x : img.intensity) {
    long v = mx > 0 ? std::lround(x / mx * 65535.0) : 0;
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
  }
  return out;
}

std::string diffraction_csv(const DiffractionImage& img) {
  auto nrm = img.normalized();
  std::ostringstream o;
  o << "ku,kv,intensity,normalized\n";
  for (int iv = 0; iv < img.resolution; ++iv)
    for (int iu = 0; iu < img.resolution; ++iu) {
      std::size_t k = static_cast<std::size_t>(iv) * img.resolution + iu;
      o << fmt17(img.k_at(iu)) << "," << fmt17(img.k_at(iv)) << "," << fmt17(img.intensity[k]) << ","
        << fmt17(nrm[k]) << "\n";
    }
  return o.str();
}

std::string sweep_csv(const std::vector<SweepPoint>& s) {
  std::ostringstream o;
  o << "angle_rad,angle_deg,metric\n";
  for (auto& p : s) o << fmt17(p.angle) << "," << fmt17(p.angle * 180 / std::numbers::pi) << "," << fmt17(p.metric) << "\n";
  return o.str();
}

std::string dump(const json& j) { return j.dump(1) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("FileNotFound", "cannot read " + path);
  std::ostringstream o;
  o << f.rdbuf();
  return o.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("WriteFailed", "cannot write " + path);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error("WriteFailed", "cannot write " + path);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) h = (h ^ c) * 0x100000001b3ull;
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- configuration

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"out", "string", ".", "output directory", {}},
      {"name", "string", "", "artifact file stem; empty uses the target name", {}},
      {"formats", "list", "json,xyz", "point outputs for generate/export (json, xyz, csv, obj)", {}},
      {"extent", "int", 3, "tetragrid window radius in long gaps L", {}},
      {"law", "choice", "fibonacci", "spacing law of generate tetragrid", {"fibonacci", "periodic"}},
      {"alpha", "golden", "0", "Fibonacci phase alpha", {}},
      {"beta", "string", "auto", "Fibonacci phase beta; auto = 1/2 for fig, 0 otherwise", {}},
      {"period", "golden", "1", "gap scale T", {}},
      {"gamma", "golden", "0", "periodic offset gamma", {}},
      {"offsets", "list", "1/5,-17/100,31/100,-2/25,11/100", "pentagrid offsets, five values", {}},
      {"patch", "golden", "6", "half width of the pentagrid patch (frame units)", {}},
      {"window", "choice", "ball", "perpendicular-space window", {"ball", "voronoi_approx"}},
      {"radius", "golden", "1", "ball window radius", {}},
      {"shell", "golden", "5", "E8 search radius", {}},
      {"kind", "choice", "type1", "cross-section hyperplane", {"type1", "type2", "icosahedral"}},
      {"copies", "int", 0, "compound copies; 0 = 5 for type1, 20 for type2", {}},
      {"facet_normal", "list", "-1 + -1 t,-1 + -1 t,0,0", "type II facet normal in 4D (exact)", {}},
      {"input", "string", "fig", "analyze/enrich/export input: structure name or cell set JSON path", {}},
      {"inner", "string", "cqc1", "verify subset inner set: structure name or path", {}},
      {"outer", "string", "fig", "verify subset outer set: structure name or path", {}},
      {"axis", "string", "5fold", "diffraction axis: 5fold, 3fold, 2fold or x,y,z", {}},
      {"kextent", "string", "12", "diffraction k range half width", {}},
      {"resolution", "int", 256, "diffraction samples per side", {}},
      {"crop", "golden", "0", "keep points with |x| <= crop before diffraction; 0 keeps all", {}},
      {"steps", "int", 64, "convergence sweep angles", {}},
      {"witnesses", "int", 32, "maximum witnesses listed by verify subset", {}},
  };
  return keys;
}

const std::vector<std::string>& targets(const std::string& command) {
  static const std::map<std::string, std::vector<std::string>> t = {
      {"generate", {"penrose", "fib-pentagrid", "tetragrid", "icosagrid", "fig", "es-qc", "xsection", "cqc"}},
      {"analyze", {"diffraction", "vertex-config", "edge-crossings", "plane-classes"}},
      {"verify", {"subset", "enrich", "sweep"}},
      {"export", {"points"}},
  };
  auto it = t.find(command);
  if (it == t.end()) throw Error("UnknownCommand", "unknown command '" + command + "'");
  return it->second;
}

namespace {

const ConfigKey& key_of(const std::string& k) {
  for (auto& c : config_keys())
    if (c.name == k) return c;
  throw Error("UnknownKey", "unknown config key '" + k + "'");
}

json normalize(const ConfigKey& k, const json& v) {
  auto bad = [&](const std::string& why) { return Error("BadValue", "key '" + k.name + "': " + why); };
  if (k.type == "int") {
    if (v.is_number_integer()) return v;
    if (v.is_string()) {
      try {
        std::size_t pos = 0;
        long n = std::stol(v.get<std::string>(), &pos);
        if (pos == v.get<std::string>().size()) return n;
      } catch (const std::exception&) {
      }
    }
    throw bad("expected an integer, got " + v.dump());
  }
  std::string s;
  if (v.is_string())
    s = v.get<std::string>();
  else if (v.is_number_integer())
    s = std::to_string(v.get<long>());
  else if (v.is_array() && k.type == "list") {
    for (auto& e : v) {
      if (!s.empty()) s += ",";
      s += e.is_string() ? e.get<std::string>() : e.dump();
    }
  } else {
    throw bad("expected a string, got " + v.dump());
  }
  if (k.type == "golden") {
    try {
      GoldenNum::parse(s);
    } catch (const std::exception&) {
      throw bad("not an exact value: '" + s + "'");
    }
  }
  if (k.type == "choice" && std::find(k.choices.begin(), k.choices.end(), s) == k.choices.end())
    throw bad("'" + s + "' is not one of the allowed values");
  return s;
}

}  // namespace

JobConfig JobConfig::make(const std::string& command, const std::string& target, const json& overrides) {
  auto& ts = targets(command);
  if (std::find(ts.begin(), ts.end(), target) == ts.end())
    throw Error("UnknownTarget", "unknown target '" + target + "' for " + command);
  if (!overrides.is_object()) throw Error("BadConfig", "config must be a JSON object");
  JobConfig c;
  c.command = command;
  c.target = target;
  c.values = json::object();
  for (auto& k : config_keys()) c.values[k.name] = k.default_value;
  for (auto& [k, v] : overrides.items()) c.values[k] = normalize(key_of(k), v);
  return c;
}

json JobConfig::to_json() const { return {{"command", command}, {"target", target}, {"config", values}}; }

JobConfig JobConfig::from_manifest(const json& m) {
  if (!m.is_object() || !m.contains("command") || !m.contains("target") || !m.contains("config"))
    throw Error("BadManifest", "manifest lacks command, target or config");
  return make(m["command"].get<std::string>(), m["target"].get<std::string>(), m["config"]);
}

std::string JobConfig::str(const std::string& k) const {
  key_of(k);
  auto& v = values.at(k);
  return v.is_string() ? v.get<std::string>() : v.dump();
}

long JobConfig::num(const std::string& k) const {
  key_of(k);
  return values.at(k).get<long>();
}

GoldenNum JobConfig::golden(const std::string& k) const {
  try {
    return GoldenNum::parse(str(k));
  } catch (const std::invalid_argument&) {
    throw Error("BadValue", "key '" + k + "' is not an exact value");
  }
}

std::vector<std::string> JobConfig::list(const std::string& k) const {
  std::vector<std::string> r;
  std::stringstream ss(str(k));
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto i = item.find_first_not_of(' '), j = item.find_last_not_of(' ');
    if (i != std::string::npos) r.push_back(item.substr(i, j - i + 1));
  }
  return r;
}

// ---- pipelines

namespace {

struct Ctx {
  const JobConfig& cfg;
  std::string out, stem;
  RunResult res;
  json inputs = json::object();
  json resolved = json::object();

  void emit(const std::string& suffix, const std::string& bytes) {
    std::string file = stem + suffix;
    write_file((fs::path(out) / file).string(), bytes);
    res.artifacts.push_back({file, bytes.size(), hex64(fnv1a64(bytes))});
  }
};

GoldenNum beta_for(Ctx& c, bool fig) {
  std::string b = c.cfg.str("beta");
  GoldenNum v = b == "auto" ? (fig ? GoldenNum::frac(1, 2) : GoldenNum(0)) : c.cfg.golden("beta");
  c.resolved["beta"] = v.str();
  return v;
}

SpacingLaw fib_law(Ctx& c, bool fig) {
  GoldenNum alpha = c.cfg.golden("alpha"), T = c.cfg.golden("period");
  c.resolved["alpha"] = alpha.str();
  auto law = SpacingLaw::fibonacci(alpha, beta_for(c, fig), T);
  law.validate();
  return law;
}

SpacingLaw periodic_law(Ctx& c) {
  auto law = SpacingLaw::periodic(c.cfg.golden("period"), c.cfg.golden("gamma"));
  law.validate();
  return law;
}

TetragridOptions grid_opts(const Ctx& c) {
  TetragridOptions o;
  o.extent = static_cast<int>(c.cfg.num("extent"));
  if (o.extent < 1) throw Error("BadValue", "extent must be >= 1");
  return o;
}

QC4 make_qc4(const Ctx& c) {
  WindowKind w = c.cfg.str("window") == "ball" ? WindowKind::ball : WindowKind::voronoi_approx;
  return elser_sloane_points(projection_spec(w, c.cfg.golden("radius")), c.cfg.golden("shell"));
}

SectionParams section_params(const Ctx& c) {
  SectionParams p;
  auto v = c.cfg.list("facet_normal");
  if (v.size() != 4) throw Error("BadValue", "facet_normal needs four values");
  for (int i = 0; i < 4; ++i) p.facet_normal(i) = GoldenNum::parse(v[i]);
  if (p.facet_normal.isZero()) throw Error("BadValue", "facet_normal is zero");
  return p;
}

CellSet make_cqc(Ctx& c, SectionKind kind) {
  QC4 qc = make_qc4(c);
  auto s = cross_section(qc, kind, section_params(c));
  return compound_qc(s, static_cast<int>(c.cfg.num("copies")));
}

bool is_structure_name(const std::string& s) {
  static const std::vector<std::string> names = {"tetragrid", "icosagrid", "fig", "xsection", "cqc", "cqc1", "cqc2"};
  return std::find(names.begin(), names.end(), s) != names.end();
}

CellSet structure(Ctx& c, const std::string& what) {
  if (what == "tetragrid") {
    SpacingLaw law = c.cfg.str("law") == "periodic" ? periodic_law(c) : fib_law(c, false);
    return tetragrid_cells(law, grid_opts(c));
  }
  if (what == "icosagrid") return fibonacci_icosagrid(periodic_law(c), grid_opts(c));
  if (what == "fig") return fibonacci_icosagrid(fib_law(c, true), grid_opts(c));
  SectionKind kind = parse_section_kind(c.cfg.str("kind"));
  if (what == "xsection") return cross_section(make_qc4(c), kind, section_params(c)).cells;
  if (what == "cqc") return make_cqc(c, kind);
  if (what == "cqc1") return make_cqc(c, SectionKind::type1);
  if (what == "cqc2") return make_cqc(c, SectionKind::type2);
  // a file
  std::string bytes = read_file(what);
  c.inputs[what] = hex64(fnv1a64(bytes));
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::exception& e) {
    throw Error("BadJson", what + ": " + e.what());
  }
  return cellset_from_json(j);
}

CellSet input_set(Ctx& c, const std::string& key) {
  std::string v = c.cfg.str(key);
  if (!is_structure_name(v) && !fs::exists(v)) throw Error("FileNotFound", "input '" + v + "' is neither a structure nor a file");
  return structure(c, v);
}

void emit_cells(Ctx& c, const CellSet& s) {
  bool wrote_json = false;
  for (auto& f : c.cfg.list("formats")) {
    PointFormat pf = parse_point_format(f);
    if (pf == PointFormat::json) {
      c.emit(".json", dump(to_json(s)));
      wrote_json = true;
    } else if (pf == PointFormat::obj) {
      c.emit(".obj", cellset_obj(s));
    } else {
      c.emit("." + to_string(pf), format_points(s.points, pf));
    }
  }
  if (!wrote_json) c.emit(".json", dump(to_json(s)));
  c.res.summary = {{"cells", s.cells.size()}, {"points", s.points.size()}, {"kind", s.provenance.kind}};
}

void gen_pentagrid(Ctx& c, bool fib) {
  auto off = c.cfg.list("offsets");
  if (off.size() != 5) throw Error("BadValue", "offsets needs five values");
  std::array<GoldenNum, 5> o;
  for (int i = 0; i < 5; ++i) o[i] = GoldenNum::parse(off[i]);
  GoldenNum h = c.cfg.golden("patch");
  if (h.sign() <= 0) throw Error("BadValue", "patch must be positive");
  ExactFrame fr(5);
  auto grid = pentagrid(o, fib);
  Box2 box{-h, h, -h, h};
  auto xs = grid_intersections(fr, grid, box);
  Tiling t = dual_tiling(fr, grid, box);
  auto chk = check_tiling(t);
  c.emit(".json", dump(to_json(t, fr)));
  c.emit(".svg", tiling_svg(t, fr));
  c.res.summary = {{"intersections", xs.size()},
                   {"cells", t.cells.size()},
                   {"shapes", t.shape_names},
                   {"overlapping_pairs", chk.overlapping_pairs},
                   {"bad_edges", chk.bad_edges},
                   {"boundary_loops", chk.boundary_loops},
                   {"area_matches", chk.cell_area == chk.boundary_area},
                   {"ok", chk.ok()}};
}

Eigen::Vector3d parse_axis(const std::string& a, double& fold) {
  fold = 0;
  if (a == "5fold") {
    fold = 2 * std::numbers::pi / 5;
    return to_double(fivefold_axis());
  }
  if (a == "3fold") {
    fold = 2 * std::numbers::pi / 3;
    return to_double(icosagrid_normals()[0]);
  }
  if (a == "2fold") {
    fold = std::numbers::pi;
    for (auto& r : icosahedral_rotations()) {
      GoldenNum tr = r(0, 0) + r(1, 1) + r(2, 2);
      if (tr != GoldenNum(-1)) continue;
      Mat3 p = r + Mat3::Identity();
      for (int j = 0; j < 3; ++j)
        if (!p.col(j).isZero()) return to_double(Vec3(p.col(j)));
    }
  }
  std::stringstream ss(a);
  std::string item;
  std::vector<double> v;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error("BadValue", "bad axis '" + a + "'");
    }
  }
  if (v.size() != 3 || (v[0] == 0 && v[1] == 0 && v[2] == 0)) throw Error("BadValue", "bad axis '" + a + "'");
  return {v[0], v[1], v[2]};
}

void analyze_diffraction(Ctx& c) {
  CellSet s = input_set(c, "input");
  std::vector<Vec3> pts = s.points;
  GoldenNum crop = c.cfg.golden("crop");
  if (crop.sign() > 0) pts = ball(pts, crop * crop);
  if (pts.empty()) throw Error("EmptyPointSet", "no points to diffract");
  double fold;
  Eigen::Vector3d axis = parse_axis(c.cfg.str("axis"), fold);
  double ext;
  try {
    ext = std::stod(c.cfg.str("kextent"));
  } catch (const std::exception&) {
    throw Error("BadValue", "kextent is not a number");
  }
  int res = static_cast<int>(c.cfg.num("resolution"));
  if (res < 2 || res % 2 || ext <= 0) throw Error("BadValue", "resolution must be even and >= 2, kextent > 0");
  auto fp = float_points(pts);
  auto img = diffraction_image(fp, axis, ext, res, c.cfg.str("axis"));
  double mx = *std::max_element(img.intensity.begin(), img.intensity.end());
  c.emit(".pgm", diffraction_pgm(img));
  c.emit(".csv", diffraction_csv(img));
  json summ = {{"type", "diffraction"},
               {"points", fp.size()},
               {"axis", {img.axis(0), img.axis(1), img.axis(2)}},
               {"kextent", ext},
               {"resolution", res},
               {"max_intensity", mx},
               {"n_squared", static_cast<double>(fp.size()) * fp.size()}};
  if (fold > 0) {
    auto rot = diffraction_image_rotated(fp, axis, ext, res, fold);
    summ["fold_angle_deg"] = fold * 180 / std::numbers::pi;
    summ["forward_peak_radius"] = forward_peak_radius(fp);
    summ["rotation_rms"] = relative_rms(img, rot, forward_peak_radius(fp));
  }
  c.emit(".json", dump(summ));
  c.res.summary = summ;
}

void verify_enrich(Ctx& c) {
  CellSet s = input_set(c, "input");
  CellSet e = enrich(s);
  CellSet e2 = enrich(e);
  bool idem = e.points == e2.points;
  TetragridOptions o;
  o.window_r2 = s.provenance.window_r2;
  CellSet fig = fibonacci_icosagrid(fib_law(c, true), o);
  json betas = json::object();
  for (int k = 0; k < 5; ++k) betas[std::to_string(k)] = e.provenance.params.at("beta" + std::to_string(k));
  c.emit(".json", dump(to_json(e)));
  json rep = {{"type", "enrich"},
              {"input_points", s.points.size()},
              {"points", e.points.size()},
              {"cells", e.cells.size()},
              {"betas", betas},
              {"idempotent", idem},
              {"fig_points", fig.points.size()},
              {"equals_fig", e.points == fig.points}};
  c.emit(".report.json", dump(rep));
  c.res.summary = rep;
}

void verify_sweep(Ctx& c) {
  int steps = static_cast<int>(c.cfg.num("steps"));
  auto sw = convergence_sweep(steps, static_cast<int>(c.cfg.num("extent")));
  std::size_t arg = 0;
  for (std::size_t i = 1; i < sw.size(); ++i)
    if (sw[i].metric < sw[arg].metric) arg = i;
  c.emit(".csv", sweep_csv(sw));
  json rep = {{"type", "sweep"},
              {"steps", steps},
              {"argmin", arg},
              {"min_metric", sw[arg].metric},
              {"min_angle_deg", sw[arg].angle * 180 / std::numbers::pi},
              {"metric_at_zero", sw.front().metric},
              {"metric_at_golden", sw.back().metric}};
  c.emit(".json", dump(rep));
  c.res.summary = rep;
}

void do_export(Ctx& c) {
  std::string path = c.cfg.str("input");
  std::string bytes = read_file(path);
  c.inputs[path] = hex64(fnv1a64(bytes));
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::exception& e) {
    throw Error("BadJson", path + ": " + e.what());
  }
  std::string type = j.value("type", "");
  std::size_t n = 0;
  for (auto& f : c.cfg.list("formats")) {
    PointFormat pf = parse_point_format(f);
    std::string ext = "." + to_string(pf);
    if (type == "cellset") {
      CellSet s = cellset_from_json(j);
      n = s.points.size();
      c.emit(ext, pf == PointFormat::obj ? cellset_obj(s) : format_points(s.points, pf));
    } else if (type == "qc4") {
      auto p = qc4_points_from_json(j);
      n = p.size();
      c.emit(ext, format_points(p, pf));
    } else if (type == "points" && j.value("dim", 0) == 3) {
      auto p = points3_from_json(j);
      n = p.size();
      c.emit(ext, format_points(p, pf));
    } else {
      throw Error("BadJson", path + " is not a cell set, QC4 or 3D point document");
    }
  }
  c.res.summary = {{"points", n}};
}

void dispatch(Ctx& c) {
  const std::string& cmd = c.cfg.command;
  const std::string& t = c.cfg.target;
  if (cmd == "generate") {
    if (t == "penrose") return gen_pentagrid(c, false);
    if (t == "fib-pentagrid") return gen_pentagrid(c, true);
    if (t == "es-qc") {
      QC4 qc = make_qc4(c);
      c.emit(".json", dump(to_json(qc)));
      for (auto& f : c.cfg.list("formats")) {
        PointFormat pf = parse_point_format(f);
        if (pf == PointFormat::xyz || pf == PointFormat::csv) c.emit("." + f, format_points(qc.points, pf));
      }
      c.res.summary = {{"points", qc.points.size()},
                       {"window_r2", qc.window_r2.str()},
                       {"complete_q2", qc.complete_q2.str()}};
      return;
    }
    CellSet s = structure(c, t);
    return emit_cells(c, s);
  }
  if (cmd == "analyze") {
    if (t == "diffraction") return analyze_diffraction(c);
    CellSet s = input_set(c, "input");
    json r;
    if (t == "vertex-config") r = to_json(vertex_configurations(s));
    if (t == "edge-crossings") r = to_json(edge_crossing_catalog(s));
    if (t == "plane-classes") r = to_json(plane_classes(s));
    c.emit(".json", dump(r));
    c.res.summary = r;
    for (auto k : {"census", "classes", "directions"}) c.res.summary.erase(k);
    return;
  }
  if (cmd == "verify") {
    if (t == "subset") {
      long w = c.cfg.num("witnesses");
      if (w < 0) throw Error("BadValue", "witnesses must be >= 0");
      CellSet inner = input_set(c, "inner"), outer = input_set(c, "outer");
      auto rep = align_and_subset_check(inner, outer, static_cast<std::size_t>(w));
      json r = to_json(rep);
      c.emit(".json", dump(r));
      c.res.summary = r;
      c.res.summary.erase("witnesses");
      c.res.summary["witnesses_listed"] = rep.unmatched.size();
      return;
    }
    if (t == "enrich") return verify_enrich(c);
    if (t == "sweep") return verify_sweep(c);
  }
  if (cmd == "export") return do_export(c);
  throw Error("UnknownTarget", "nothing to run for " + cmd + " " + t);
}

}  // namespace

RunResult run(const JobConfig& cfg) {
  Ctx c{cfg, cfg.str("out"), cfg.str("name").empty() ? cfg.target : cfg.str("name"), {}};
  dispatch(c);
  json outs = json::array();
  for (auto& a : c.res.artifacts) outs.push_back({{"file", a.file}, {"bytes", a.bytes}, {"fnv1a64", a.fnv1a64}});
  json m = cfg.to_json();
  m["tool"] = "qcforge";
  m["format"] = 1;
  m["resolved"] = c.resolved;
  m["inputs"] = c.inputs;
  m["outputs"] = outs;
  write_file((fs::path(c.out) / (c.stem + ".manifest.json")).string(), dump(m));
  c.res.manifest = m;
  return c.res;
}

json error_json(const std::exception& e) {
  if (auto q = dynamic_cast<const Error*>(&e)) return {{"error", q->code}, {"message", q->what()}};
  if (dynamic_cast<const std::invalid_argument*>(&e)) return {{"error", "BadValue"}, {"message", e.what()}};
  if (dynamic_cast<const json::exception*>(&e)) return {{"error", "BadJson"}, {"message", e.what()}};
  return {{"error", "Internal"}, {"message", e.what()}};
}

}  // namespace qc::io
