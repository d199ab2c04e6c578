#include "gridpop/tiler.hpp"

#include <cmath>

#include "gridpop/error.hpp"
#include "json.hpp"

namespace gridpop {

Box TileGrid::cell_box(Cell c) const {
  const double x0 = origin_x + c.col * tile_size_m;
  const double y1 = origin_y - c.row * tile_size_m;
  return {x0, y1 - tile_size_m, x0 + tile_size_m, y1};
}

Box TileGrid::extent() const {
  return {origin_x, origin_y - n_rows * tile_size_m, origin_x + n_cols * tile_size_m, origin_y};
}

namespace {

long long window_start(int index, double tile_size_m, double pixel_size) {
  return std::llround(index * tile_size_m / pixel_size);
}

// Full tiles along one axis whose pixel windows fit inside `pixels`.
int full_tiles(int pixels, double pixel_size, double tile_size_m, long long side) {
  const double extent = pixels * pixel_size;
  // The epsilon keeps exact multiples such as 5400 px * 0.02 m from losing
  // a tile to representation error.
  int n = static_cast<int>(std::floor(extent / tile_size_m + 1e-9));
  while (n > 0 && window_start(n - 1, tile_size_m, pixel_size) + side > pixels) --n;
  return n;
}

}  // namespace

TileGrid build_grid(const Raster& raster, double tile_size_m) {
  if (!(tile_size_m > 0.0)) throw Error(ErrorKind::domain, "tile size must be positive");
  const GeoTransform& t = raster.transform;
  const long long side_x = std::llround(tile_size_m / t.pixel_w);
  const long long side_y = std::llround(tile_size_m / t.pixel_h);
  if (side_x < 1 || side_y < 1) throw Error(ErrorKind::domain, "tile smaller than one pixel");

  TileGrid g;
  g.origin_x = t.origin_x;
  g.origin_y = t.origin_y;
  g.tile_size_m = tile_size_m;
  g.n_cols = full_tiles(raster.width(), t.pixel_w, tile_size_m, side_x);
  g.n_rows = full_tiles(raster.height(), t.pixel_h, tile_size_m, side_y);
  if (g.n_cols < 1 || g.n_rows < 1) {
    throw Error(ErrorKind::domain, "raster extent smaller than one tile");
  }
  g.dropped_right_m = std::max(0.0, raster.width() * t.pixel_w - g.n_cols * tile_size_m);
  g.dropped_bottom_m = std::max(0.0, raster.height() * t.pixel_h - g.n_rows * tile_size_m);
  return g;
}

PixelWindow cell_window(const Raster& raster, const TileGrid& grid, Cell cell) {
  if (!grid.contains(cell)) {
    throw Error(ErrorKind::domain, "cell (" + std::to_string(cell.row) + "," +
                                       std::to_string(cell.col) + ") outside the grid");
  }
  const GeoTransform& t = raster.transform;
  // Grid and raster share the top-left anchor.
  PixelWindow w;
  w.x0 = static_cast<int>(window_start(cell.col, grid.tile_size_m, t.pixel_w));
  w.y0 = static_cast<int>(window_start(cell.row, grid.tile_size_m, t.pixel_h));
  w.side_x = static_cast<int>(std::llround(grid.tile_size_m / t.pixel_w));
  w.side_y = static_cast<int>(std::llround(grid.tile_size_m / t.pixel_h));
  return w;
}

Image extract_tile(const Raster& raster, const TileGrid& grid, Cell cell) {
  const PixelWindow w = cell_window(raster, grid, cell);
  const Image& src = raster.image;
  Image block(w.side_x, w.side_y, src.channels);
  const std::size_t row_bytes = static_cast<std::size_t>(w.side_x) * src.channels;
  for (int y = 0; y < w.side_y; ++y) {
    const auto* from = &src.samples[src.index(w.x0, w.y0 + y)];
    std::copy(from, from + row_bytes, &block.samples[block.index(0, y)]);
  }
  return block;
}

namespace {

struct Tap {
  int source;
  std::int64_t weight;
};

// Overlaps of `target` output intervals with `source` input pixels, in units
// where an output pixel spans `source` and an input pixel spans `target`.
std::vector<std::vector<Tap>> area_taps(int source, int target) {
  std::vector<std::vector<Tap>> taps(static_cast<std::size_t>(target));
  const std::int64_t S = source, T = target;
  for (std::int64_t o = 0; o < T; ++o) {
    const std::int64_t lo = o * S, hi = (o + 1) * S;
    for (std::int64_t k = lo / T; k < S && k * T < hi; ++k) {
      const std::int64_t w = std::min(hi, (k + 1) * T) - std::max(lo, k * T);
      if (w > 0) taps[o].push_back({static_cast<int>(k), w});
    }
  }
  return taps;
}

}  // namespace

Image resample_area(const Image& block, int target_px) {
  if (target_px < 1) throw Error(ErrorKind::domain, "target_px must be at least 1");
  if (block.width < 1 || block.height < 1) throw Error(ErrorKind::domain, "empty pixel block");
  const int W = block.width, H = block.height, C = block.channels, T = target_px;
  const auto taps_x = area_taps(W, T);
  const auto taps_y = area_taps(H, T);

  // Horizontal pass into exact integer sums, then vertical.
  std::vector<std::int64_t> rows(static_cast<std::size_t>(H) * T * C, 0);
  for (int y = 0; y < H; ++y) {
    for (int o = 0; o < T; ++o) {
      for (int c = 0; c < C; ++c) {
        std::int64_t sum = 0;
        for (const Tap& tap : taps_x[o]) sum += tap.weight * block.at(tap.source, y, c);
        rows[(static_cast<std::size_t>(y) * T + o) * C + c] = sum;
      }
    }
  }

  const std::int64_t denom = static_cast<std::int64_t>(W) * H;
  Image out(T, T, 3);
  for (int oy = 0; oy < T; ++oy) {
    for (int ox = 0; ox < T; ++ox) {
      for (int c = 0; c < C; ++c) {
        std::int64_t sum = 0;
        for (const Tap& tap : taps_y[oy]) {
          sum += tap.weight * rows[(static_cast<std::size_t>(tap.source) * T + ox) * C + c];
        }
        const auto v = static_cast<std::uint8_t>((2 * sum + denom) / (2 * denom));
        if (C == 3) {
          out.at(ox, oy, c) = v;
        } else {
          out.at(ox, oy, 0) = out.at(ox, oy, 1) = out.at(ox, oy, 2) = v;
        }
      }
    }
  }
  return out;
}

TileImage make_tile_image(const Raster& raster, const TileGrid& grid, Cell cell, int target_px) {
  Image block = extract_tile(raster, grid, cell);
  TileImage tile;
  tile.cell = cell;
  tile.source_px = block.width;
  tile.pixels = resample_area(block, target_px);
  return tile;
}

std::string tile_file_name(std::string_view site_id, Cell cell) {
  return std::string(site_id) + "_" + std::to_string(cell.row) + "_" + std::to_string(cell.col) + ".png";
}

using json = nlohmann::json;

std::string grid_to_json(const GridDescription& d) {
  json doc = {
      {"site_id", d.site_id},
      {"crs_id", d.crs_id},
      {"origin_x", d.grid.origin_x},
      {"origin_y", d.grid.origin_y},
      {"tile_size_m", d.grid.tile_size_m},
      {"n_cols", d.grid.n_cols},
      {"n_rows", d.grid.n_rows},
      {"dropped_right_m", d.grid.dropped_right_m},
      {"dropped_bottom_m", d.grid.dropped_bottom_m},
      {"raster_width", d.raster_width},
      {"raster_height", d.raster_height},
      {"pixel_w", d.pixel_w},
      {"pixel_h", d.pixel_h},
      {"source_px", d.source_px},
      {"target_px", d.target_px},
      {"raster_path", d.raster_path},
      {"footprints_path", d.footprints_path},
      {"tiles_dir", d.tiles_dir},
  };
  return doc.dump(2) + "\n";
}

GridDescription grid_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    GridDescription d;
    d.site_id = doc.at("site_id").get<std::string>();
    d.crs_id = doc.at("crs_id").get<std::string>();
    d.grid.origin_x = doc.at("origin_x").get<double>();
    d.grid.origin_y = doc.at("origin_y").get<double>();
    d.grid.tile_size_m = doc.at("tile_size_m").get<double>();
    d.grid.n_cols = doc.at("n_cols").get<int>();
    d.grid.n_rows = doc.at("n_rows").get<int>();
    d.grid.dropped_right_m = doc.at("dropped_right_m").get<double>();
    d.grid.dropped_bottom_m = doc.at("dropped_bottom_m").get<double>();
    d.raster_width = doc.at("raster_width").get<int>();
    d.raster_height = doc.at("raster_height").get<int>();
    d.pixel_w = doc.at("pixel_w").get<double>();
    d.pixel_h = doc.at("pixel_h").get<double>();
    d.source_px = doc.at("source_px").get<int>();
    d.target_px = doc.at("target_px").get<int>();
    d.raster_path = doc.at("raster_path").get<std::string>();
    d.footprints_path = doc.at("footprints_path").get<std::string>();
    d.tiles_dir = doc.at("tiles_dir").get<std::string>();
    return d;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("invalid grid description: ") + e.what());
  }
}

}  // namespace gridpop
