#pragma once

// Cloud filtering, residential labeling, site splits and the JSON Lines
// manifest that records every retained tile.

#include <span>
#include <string>
#include <vector>

#include "gridpop/config.hpp"
#include "gridpop/tiler.hpp"

namespace gridpop {

struct LabeledTile {
  std::string site_id;
  Cell cell;
  Box world_box;
  double cloud_ratio = 0.0;
  double occupancy = 0.0;
  int label = 0;
  Split split = Split::train;
  std::string image_path;

  friend bool operator==(const LabeledTile&, const LabeledTile&) = default;
};

/// Fraction of pixels whose channels are all >= white_level.
double cloud_ratio(const Image& tile, int white_level);

/// Keeps tiles with cloud_ratio <= max_ratio, preserving order.
std::vector<LabeledTile> filter_clouds(std::vector<LabeledTile> tiles, double max_ratio);

/// filter_clouds() for sites where the filter applies; exempt sites pass through.
std::vector<LabeledTile> apply_cloud_filter(std::vector<LabeledTile> tiles, const PipelineConfig& config);

/// 1 iff occupancy >= threshold.
int assign_label(double occupancy, double threshold);

/// Throws Error(config) for sites missing from the map.
Split assign_split(std::string_view site_id, const std::map<std::string, Split, std::less<>>& split_map);

struct ClassBalance {
  std::size_t residential = 0;
  std::size_t non_residential = 0;
  double fraction_residential = 0.0;
  double fraction_non_residential = 0.0;
};

/// Throws Error(domain) for an empty dataset.
ClassBalance class_balance(std::span<const LabeledTile> tiles);

/// Labels one cell: occupancy from footprints rasterized at
/// target_px x supersample, cloud ratio from the resampled tile image.
LabeledTile label_cell(std::string_view site_id, const TileGrid& grid, Cell cell,
                       const FootprintSet& footprints, const Image& tile_image,
                       const PipelineConfig& config, std::string image_path);

/// Orders tiles by (site_id, row, col).
void sort_tiles(std::vector<LabeledTile>& tiles);

std::string manifest_header(const PipelineConfig& config);
std::string format_manifest_record(const LabeledTile& tile);

/// Header line followed by one record per tile in (site_id, row, col) order.
std::string format_manifest(const PipelineConfig& config, std::vector<LabeledTile> tiles);

struct Manifest {
  std::string config_json;
  std::vector<LabeledTile> tiles;
};

Manifest parse_manifest(std::string_view text);

}  // namespace gridpop
