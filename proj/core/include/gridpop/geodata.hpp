#pragma once

// Georeferenced raster and footprint ingestion.
//
// All inputs are expected in a projected, meter-based CRS; no reprojection
// happens here. A CRS is identified by an opaque string read from a
// `<name>.crs.json` sidecar next to each input file.

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridpop/geometry.hpp"
#include "gridpop/image_io.hpp"

namespace gridpop {

/// Axis-aligned pixel-to-world mapping. (origin_x, origin_y) is the world
/// position of the top-left corner of pixel (0, 0); world y decreases with
/// the row index.
struct GeoTransform {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double pixel_w = 1.0;
  double pixel_h = 1.0;
  std::string crs_id;

  Point pixel_corner(double col, double row) const {
    return {origin_x + col * pixel_w, origin_y - row * pixel_h};
  }

  friend bool operator==(const GeoTransform&, const GeoTransform&) = default;
};

struct Raster {
  Image image;
  GeoTransform transform;

  int width() const { return image.width; }
  int height() const { return image.height; }
  int channels() const { return image.channels; }
  /// World extent covered by the raster.
  Box extent() const {
    return {transform.origin_x, transform.origin_y - height() * transform.pixel_h,
            transform.origin_x + width() * transform.pixel_w, transform.origin_y};
  }
};

/// Validates sizes and channel count; throws Error(geometry) on violation.
Raster make_raster(Image image, GeoTransform transform);

/// Parses ESRI world-file text (A, D, B, E, C, F on six lines). The file
/// stores the center of pixel (0,0); the returned origin is its corner.
GeoTransform parse_world_file(std::string_view text);
std::string format_world_file(const GeoTransform& transform);

enum class ClassTag { residential, non_residential, unknown };

std::string_view to_string(ClassTag tag) noexcept;
ClassTag parse_class_tag(std::string_view text);

/// Maps the value of one feature property onto a class. Values not listed
/// map to ClassTag::unknown.
struct TagMap {
  std::string key = "building";
  std::map<std::string, ClassTag, std::less<>> values;

  static TagMap defaults();
  ClassTag classify(std::string_view value) const;
};

struct Footprint {
  std::string id;
  Polygon polygon;
  ClassTag class_tag = ClassTag::unknown;
  /// Raw property value the class was derived from; empty when absent.
  std::string source_tag;

  friend bool operator==(const Footprint&, const Footprint&) = default;
};

struct FootprintSet {
  std::vector<Footprint> footprints;
  std::string crs_id;

  std::size_t count(ClassTag tag) const;
};

struct Diagnostic {
  std::size_t feature_index = 0;
  std::string feature_id;
  std::string reason;
};

struct FootprintIngest {
  FootprintSet set;
  std::vector<Diagnostic> rejected;
};

/// Parses a GeoJSON FeatureCollection of Polygon / MultiPolygon features.
///
/// Invalid features (open or self-intersecting rings, zero area, unsupported
/// geometry, duplicate ids) are skipped and reported in `rejected`.
/// MultiPolygon parts become separate footprints with ids `<id>#<k>`, k from 1.
/// A `crs` member on the collection or any feature that disagrees with
/// `crs_id` is fatal (Error(crs_mismatch)); so is a non-collection document.
FootprintIngest parse_footprints(std::string_view document, const TagMap& tags,
                                 std::string_view crs_id);

/// GeoJSON text for a footprint set. Writes `source_tag` under `tag_key`
/// and, when `persons` is non-empty, a per-feature `persons` property.
std::string serialize_footprints(const FootprintSet& set, std::string_view tag_key = "building",
                                 std::span<const double> persons = {});

/// `<name>.ingest.log` body: one line per rejected feature.
std::string format_ingest_log(std::string_view source_name, const FootprintIngest& ingest);

/// `path` with its extension replaced by `.crs.json`.
std::filesystem::path crs_sidecar_path(const std::filesystem::path& path);
std::string read_crs_sidecar(const std::filesystem::path& sidecar);
void write_crs_sidecar(const std::filesystem::path& sidecar, std::string_view crs_id);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Loads `<stem>.png` with its `.pgw` world file and CRS sidecar.
Raster load_raster(const std::filesystem::path& png_path);
void save_raster(const std::filesystem::path& png_path, const Raster& raster);

/// Reads a footprint file and its CRS sidecar.
FootprintIngest load_footprints(const std::filesystem::path& geojson_path, const TagMap& tags);

}  // namespace gridpop
