#include "gridpop/labeler.hpp"

#include <algorithm>
#include <tuple>

#include "gridpop/error.hpp"
#include "gridpop/rasterizer.hpp"
#include "json.hpp"
#include "text.hpp"

namespace gridpop {

using json = nlohmann::json;

double cloud_ratio(const Image& tile, int white_level) {
  const std::size_t pixels = static_cast<std::size_t>(tile.width) * tile.height;
  if (pixels == 0) return 0.0;
  std::size_t white = 0;
  for (std::size_t i = 0; i < pixels; ++i) {
    bool all = true;
    for (int c = 0; c < tile.channels; ++c) {
      if (tile.samples[i * tile.channels + c] < white_level) {
        all = false;
        break;
      }
    }
    white += all;
  }
  return static_cast<double>(white) / static_cast<double>(pixels);
}

std::vector<LabeledTile> filter_clouds(std::vector<LabeledTile> tiles, double max_ratio) {
  std::erase_if(tiles, [&](const LabeledTile& t) { return t.cloud_ratio > max_ratio; });
  return tiles;
}

std::vector<LabeledTile> apply_cloud_filter(std::vector<LabeledTile> tiles, const PipelineConfig& config) {
  std::erase_if(tiles, [&](const LabeledTile& t) {
    return config.cloud_filter_applies(t.site_id) && t.cloud_ratio > config.cloud_max_ratio;
  });
  return tiles;
}

int assign_label(double occupancy, double threshold) { return occupancy >= threshold ? 1 : 0; }

Split assign_split(std::string_view site_id, const std::map<std::string, Split, std::less<>>& split_map) {
  auto it = split_map.find(site_id);
  if (it == split_map.end()) {
    throw Error(ErrorKind::config, "site '" + std::string(site_id) + "' has no split assignment");
  }
  return it->second;
}

ClassBalance class_balance(std::span<const LabeledTile> tiles) {
  if (tiles.empty()) throw Error(ErrorKind::domain, "class balance of an empty dataset");
  ClassBalance b;
  for (const LabeledTile& t : tiles) (t.label == 1 ? b.residential : b.non_residential) += 1;
  const double n = static_cast<double>(tiles.size());
  b.fraction_residential = static_cast<double>(b.residential) / n;
  b.fraction_non_residential = static_cast<double>(b.non_residential) / n;
  return b;
}

LabeledTile label_cell(std::string_view site_id, const TileGrid& grid, Cell cell,
                       const FootprintSet& footprints, const Image& tile_image,
                       const PipelineConfig& config, std::string image_path) {
  LabeledTile t;
  t.site_id = std::string(site_id);
  t.cell = cell;
  t.world_box = grid.cell_box(cell);
  t.occupancy = occupancy_fraction(
      rasterize_coverage(footprints, t.world_box, config.target_px, config.supersample));
  t.cloud_ratio = cloud_ratio(tile_image, config.cloud_white_level);
  t.label = assign_label(t.occupancy, config.residential_threshold);
  t.split = assign_split(site_id, config.split_map);
  t.image_path = std::move(image_path);
  return t;
}

void sort_tiles(std::vector<LabeledTile>& tiles) {
  std::sort(tiles.begin(), tiles.end(), [](const LabeledTile& a, const LabeledTile& b) {
    return std::tie(a.site_id, a.cell) < std::tie(b.site_id, b.cell);
  });
}

std::string manifest_header(const PipelineConfig& config) {
  return "# gridpop-manifest config=" + config.to_json() + "\n";
}

std::string format_manifest_record(const LabeledTile& t) {
  std::string s;
  s.reserve(256);
  s += "{\"site_id\":" + json(t.site_id).dump();
  s += ",\"row\":" + std::to_string(t.cell.row);
  s += ",\"col\":" + std::to_string(t.cell.col);
  s += ",\"x_min\":" + text::fixed(t.world_box.x_min, 6);
  s += ",\"y_min\":" + text::fixed(t.world_box.y_min, 6);
  s += ",\"x_max\":" + text::fixed(t.world_box.x_max, 6);
  s += ",\"y_max\":" + text::fixed(t.world_box.y_max, 6);
  s += ",\"cloud_ratio\":" + text::shortest(t.cloud_ratio);
  s += ",\"occupancy\":" + text::shortest(t.occupancy);
  s += ",\"label\":" + std::to_string(t.label);
  s += ",\"split\":\"" + std::string(to_string(t.split)) + "\"";
  s += ",\"image_path\":" + json(t.image_path).dump();
  s += "}\n";
  return s;
}

std::string format_manifest(const PipelineConfig& config, std::vector<LabeledTile> tiles) {
  sort_tiles(tiles);
  std::string out = manifest_header(config);
  for (const LabeledTile& t : tiles) out += format_manifest_record(t);
  return out;
}

Manifest parse_manifest(std::string_view content) {
  Manifest m;
  std::size_t line_no = 0;
  constexpr std::string_view kHeader = "# gridpop-manifest config=";
  for (std::string_view line : text::split(content, '\n')) {
    ++line_no;
    line = text::trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.starts_with(kHeader)) m.config_json = std::string(line.substr(kHeader.size()));
      continue;
    }
    try {
      const json r = json::parse(line);
      LabeledTile t;
      t.site_id = r.at("site_id").get<std::string>();
      t.cell = {r.at("row").get<int>(), r.at("col").get<int>()};
      t.world_box = {r.at("x_min").get<double>(), r.at("y_min").get<double>(), r.at("x_max").get<double>(),
                     r.at("y_max").get<double>()};
      t.cloud_ratio = r.at("cloud_ratio").get<double>();
      t.occupancy = r.at("occupancy").get<double>();
      t.label = r.at("label").get<int>();
      t.split = parse_split(r.at("split").get<std::string>());
      t.image_path = r.at("image_path").get<std::string>();
      m.tiles.push_back(std::move(t));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::parse, "manifest line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return m;
}

}  // namespace gridpop
