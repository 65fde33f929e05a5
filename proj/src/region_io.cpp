#include "swarmcov/region_io.hpp"

#include <json.hpp>

#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

namespace swarmcov::geom {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw RegionParseError(path.string() + ": " + what);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RegionParseError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Eigen::Matrix2Xd close_and_pack(std::vector<Vec2> pts, const std::filesystem::path& path) {
  if (pts.size() >= 2 && (pts.front() - pts.back()).norm() <= 1e-12) {
    pts.pop_back();  // explicit closing vertex
  }
  if (pts.size() < 3) fail(path, "degenerate ring: fewer than 3 distinct vertices");
  Eigen::Matrix2Xd m(2, pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) m.col(i) = pts[i];
  return m;
}

LoadedRegion from_ring(Eigen::Matrix2Xd ring, std::string name, std::string crs,
                       std::optional<double> stated_area,
                       const RegionNormalize& normalize,
                       const std::filesystem::path& path) {
  Polygon poly = [&] {
    try {
      return Polygon(std::move(ring));
    } catch (const GeometryError& e) {
      fail(path, std::string("ring ") + e.what());
    }
  }();
  const double raw_area = poly.area();

  if (normalize.translate_to_origin) {
    poly = poly.translated(-poly.bounding_box().min());
  }
  if (normalize.target_bbox_width) {
    const double width = poly.bounding_box().sizes().x();
    if (width <= 0.0) fail(path, "ring has zero bounding-box width");
    const double scale = *normalize.target_bbox_width / width;
    const Vec2 origin = poly.bounding_box().min();
    Eigen::Matrix2Xd v = poly.vertices();
    v = ((v.colwise() - origin) * scale).colwise() + origin;
    poly = Polygon(std::move(v));
  }
  return LoadedRegion{std::move(name), std::move(crs), Region(std::move(poly)),
                      raw_area, stated_area};
}

LoadedRegion parse_json_region(const std::string& text, const RegionNormalize& normalize,
                               const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(text);  // rejects trailing content
  } catch (const json::exception& e) {
    fail(path, std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) fail(path, "expected a JSON object at top level");
  for (const auto& [key, _] : doc.items()) {
    if (key != "name" && key != "crs" && key != "ring" && key != "area_m2") {
      fail(path, "unknown field \"" + key + "\"");
    }
  }
  if (!doc.contains("name") || !doc["name"].is_string()) {
    fail(path, "field \"name\": expected a string");
  }
  if (!doc.contains("crs") || !doc["crs"].is_string()) {
    fail(path, "field \"crs\": expected a string");
  }
  const std::string crs = doc["crs"].get<std::string>();
  if (crs != "utm" && crs != "local") {
    fail(path, "field \"crs\": expected \"utm\" or \"local\", got \"" + crs + "\"");
  }
  if (!doc.contains("ring") || !doc["ring"].is_array()) {
    fail(path, "field \"ring\": expected an array of [x,y] pairs");
  }
  std::optional<double> stated_area;
  if (doc.contains("area_m2")) {
    if (!doc["area_m2"].is_number()) fail(path, "field \"area_m2\": expected a number");
    stated_area = doc["area_m2"].get<double>();
  }
  std::vector<Vec2> pts;
  int idx = 0;
  for (const auto& item : doc["ring"]) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
      fail(path, "field \"ring\"[" + std::to_string(idx) + "]: expected [x,y] numbers");
    }
    pts.emplace_back(item[0].get<double>(), item[1].get<double>());
    ++idx;
  }
  if (pts.size() < 3) fail(path, "degenerate ring: fewer than 3 vertices");
  return from_ring(close_and_pack(std::move(pts), path), doc["name"].get<std::string>(),
                   crs, stated_area, normalize, path);
}

struct WktScanner {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool consume(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool at_end() {
    skip_ws();
    return pos == s.size();
  }
};

LoadedRegion parse_wkt_region(const std::string& text, const RegionNormalize& normalize,
                              const std::filesystem::path& path) {
  WktScanner sc{text};
  sc.skip_ws();
  auto keyword = [&](const char* kw) {
    std::size_t n = std::strlen(kw);
    if (text.compare(sc.pos, n, kw) == 0) {
      sc.pos += n;
      return true;
    }
    return false;
  };
  if (keyword("MULTIPOLYGON")) fail(path, "MULTIPOLYGON not supported: single outer ring only");
  if (!keyword("POLYGON")) fail(path, "expected POLYGON");
  if (!sc.consume('(')) fail(path, "expected '(' after POLYGON");
  if (!sc.consume('(')) fail(path, "expected '((' opening the outer ring");

  std::vector<Vec2> pts;
  while (true) {
    sc.skip_ws();
    char* end = nullptr;
    const double x = std::strtod(text.c_str() + sc.pos, &end);
    if (end == text.c_str() + sc.pos) fail(path, "expected coordinate number");
    sc.pos = end - text.c_str();
    sc.skip_ws();
    const double y = std::strtod(text.c_str() + sc.pos, &end);
    if (end == text.c_str() + sc.pos) fail(path, "expected y coordinate");
    sc.pos = end - text.c_str();
    pts.emplace_back(x, y);
    if (sc.consume(',')) continue;
    if (sc.consume(')')) break;
    fail(path, "expected ',' or ')' in ring");
  }
  if (sc.consume(',')) fail(path, "interior rings (holes/islands) not supported");
  if (!sc.consume(')')) fail(path, "expected ')' closing POLYGON");
  if (!sc.at_end()) fail(path, "trailing content after POLYGON");
  if (pts.size() < 3) fail(path, "degenerate ring: fewer than 3 vertices");
  return from_ring(close_and_pack(std::move(pts), path), path.stem().string(), "local",
                   std::nullopt, normalize, path);
}

}  // namespace

LoadedRegion load_region(const std::filesystem::path& path, const RegionNormalize& normalize) {
  const std::string text = read_file(path);
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) fail(path, "empty file");
  if (text[first] == '{') return parse_json_region(text, normalize, path);
  return parse_wkt_region(text, normalize, path);
}

std::filesystem::path asset_path(const std::string& filename) {
  return std::filesystem::path(SWARMCOV_ASSET_DIR) / filename;
}

}  // namespace swarmcov::geom
