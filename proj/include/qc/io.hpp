#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "qc/analysis.hpp"
#include "qc/correspondence.hpp"
#include "qc/e8qc.hpp"
#include "qc/golden.hpp"
#include "qc/grids3d.hpp"
#include "qc/multigrid.hpp"

namespace qc::io {

using json = nlohmann::json;

// exact values are ["a", "b"] rational strings, meaning a + b tau
json to_json(const GoldenNum& x);
GoldenNum golden_from_json(const json& j);
json to_json(const Vec3& v);
json to_json(const Vec4& v);
Vec3 vec3_from_json(const json& j);
Vec4 vec4_from_json(const json& j);

json to_json(const CellSet& s);
CellSet cellset_from_json(const json& j);
json to_json(const Tiling& t, const ExactFrame& frame);
json to_json(const QC4& qc);
/// points of a QC4 document
std::vector<Vec4> qc4_points_from_json(const json& j);
json to_json(const AlignmentReport& r);
json to_json(const VertexCensus& c);
json to_json(const CrossingCatalog& c);
json to_json(const std::vector<PlaneClass>& pc);

enum class PointFormat { xyz, csv, json, obj };
PointFormat parse_point_format(const std::string& s);
std::string to_string(PointFormat f);

/// %.17g
std::string fmt17(double x);

/// Sorted lexicographically on exact values. Throws on an empty set.
std::string format_points(std::vector<Vec3> pts, PointFormat f);
std::string format_points(std::vector<Vec4> pts, PointFormat f);
std::vector<Vec3> points3_from_json(const json& j);

/// triangle mesh, four faces per cell
std::string cellset_obj(const CellSet& s);
std::string tiling_svg(const Tiling& t, const ExactFrame& frame);

/// P5, 16-bit big-endian, scaled so the maximum is 65535
std::string diffraction_pgm(const DiffractionImage& img);
std::string diffraction_csv(const DiffractionImage& img);
std::string sweep_csv(const std::vector<SweepPoint>& s);

std::string dump(const json& j);  // indent 1, trailing newline
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t h);

// ---- job configuration

struct ConfigKey {
  std::string name;
  std::string type;  // int, string, golden, list, choice
  json default_value;
  std::string help;
  std::vector<std::string> choices;
};

/// the single defaults table
const std::vector<ConfigKey>& config_keys();
const std::vector<std::string>& targets(const std::string& command);

struct JobConfig {
  std::string command, target;
  json values;  // every key, resolved

  /// defaults overlaid by overrides; unknown keys and bad values throw
  static JobConfig make(const std::string& command, const std::string& target, const json& overrides = json::object());
  json to_json() const;
  static JobConfig from_manifest(const json& manifest);

  std::string str(const std::string& key) const;
  long num(const std::string& key) const;
  GoldenNum golden(const std::string& key) const;
  std::vector<std::string> list(const std::string& key) const;
};

struct Artifact {
  std::string file;  // relative to out
  std::size_t bytes = 0;
  std::string fnv1a64;
};

struct RunResult {
  json manifest;
  std::vector<Artifact> artifacts;
  json summary;
};

/// execute one pipeline; writes artifacts and <name>.manifest.json under out
RunResult run(const JobConfig& cfg);

/// {"error": code, "message": text}
json error_json(const std::exception& e);

}  // namespace qc::io
