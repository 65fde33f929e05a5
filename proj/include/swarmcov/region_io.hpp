#pragma once

#include "swarmcov/geometry.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace swarmcov::geom {

class RegionParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Post-parse affine normalization: translate the ring so its bounding-box
// minimum sits at the origin, then optionally scale uniformly so the
// bounding-box width matches a target.
struct RegionNormalize {
  bool translate_to_origin = false;
  std::optional<double> target_bbox_width;
};

struct LoadedRegion {
  std::string name;
  std::string crs;                    // "utm" or "local"
  Region region;                      // normalized per options
  double raw_area = 0.0;              // shoelace area before normalization
  std::optional<double> stated_area;  // optional "area_m2" field, when present
};

// Reads a region file: either a JSON document
//   { "name": str, "crs": "utm"|"local", "ring": [[x,y],...], "area_m2"?: num }
// or a plain WKT POLYGON with a single outer ring. Trailing content after the
// document is rejected. The ring is CCW-normalized; a closing vertex equal to
// the first is dropped.
LoadedRegion load_region(const std::filesystem::path& path,
                         const RegionNormalize& normalize = {});

// Bundled asset lookup (assets/ directory compiled into the library).
std::filesystem::path asset_path(const std::string& filename);

}  // namespace swarmcov::geom
