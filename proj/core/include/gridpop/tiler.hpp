#pragma once

#include <string>

#include "gridpop/geodata.hpp"

namespace gridpop {

struct Cell {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Square metric tiles anchored at the raster's top-left corner. Only full
/// tiles are kept; the discarded right and bottom strips are recorded.
struct TileGrid {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double tile_size_m = 36.0;
  int n_cols = 0;
  int n_rows = 0;
  double dropped_right_m = 0.0;
  double dropped_bottom_m = 0.0;

  int cell_count() const { return n_cols * n_rows; }
  bool contains(Cell c) const { return c.row >= 0 && c.row < n_rows && c.col >= 0 && c.col < n_cols; }
  Box cell_box(Cell c) const;
  Box extent() const;

  friend bool operator==(const TileGrid&, const TileGrid&) = default;
};

/// Pixel window of one cell; `side_x`/`side_y` equal round(tile / pixel size).
struct PixelWindow {
  int x0 = 0;
  int y0 = 0;
  int side_x = 0;
  int side_y = 0;
};

/// Throws Error(domain) when the raster holds less than one full tile.
TileGrid build_grid(const Raster& raster, double tile_size_m);

PixelWindow cell_window(const Raster& raster, const TileGrid& grid, Cell cell);

/// Copies the cell's pixel window. Throws Error(domain) for cells outside
/// the grid.
Image extract_tile(const Raster& raster, const TileGrid& grid, Cell cell);

struct TileImage {
  Cell cell;
  Image pixels;  // RGB, target_px x target_px
  int source_px = 0;
};

/// Exact area-weighted resampling to target_px x target_px, rounded half-up
/// per channel. Single-channel input is replicated to RGB.
Image resample_area(const Image& block, int target_px);

TileImage make_tile_image(const Raster& raster, const TileGrid& grid, Cell cell, int target_px);

std::string tile_file_name(std::string_view site_id, Cell cell);

/// Contents of a site's grid.json: the grid plus where its inputs and tile
/// images live.
struct GridDescription {
  std::string site_id;
  TileGrid grid;
  std::string crs_id;
  int raster_width = 0;
  int raster_height = 0;
  double pixel_w = 0.0;
  double pixel_h = 0.0;
  int source_px = 0;
  int target_px = 0;
  std::string raster_path;
  std::string footprints_path;
  std::string tiles_dir;

  friend bool operator==(const GridDescription&, const GridDescription&) = default;
};

std::string grid_to_json(const GridDescription& description);
GridDescription grid_from_json(std::string_view text);

}  // namespace gridpop
