#pragma once

#include <cstdint>
#include <vector>

#include "gridpop/geodata.hpp"
#include "gridpop/image_io.hpp"

namespace gridpop {

/// Per-pixel residential coverage of one tile. Pixel (0,0) is the top-left
/// (north-west) corner of the tile box.
struct CoverageMask {
  int side_px = 0;
  int supersample = 1;
  /// Covered supersample points per pixel, row-major, each in [0, supersample^2].
  std::vector<std::uint16_t> hits;

  double coverage(int x, int y) const {
    return static_cast<double>(hits[static_cast<std::size_t>(y) * side_px + x]) /
           (static_cast<double>(supersample) * supersample);
  }
  std::vector<double> coverage_values() const;
};

/// Ray-crossing nudge applied to every sample point, in meters.
inline constexpr double kSampleEpsilon = 1e-9;

/// World position of supersample point `index` along one axis. Shared with
/// tests so that brute-force oracles sample the exact same points.
inline double sample_x(const Box& box, int n_samples, int index) {
  return box.x_min + (static_cast<double>(index) + 0.5) * (box.width() / n_samples);
}
inline double sample_y(const Box& box, int n_samples, int index) {
  return box.y_max - (static_cast<double>(index) + 0.5) * (box.height() / n_samples);
}

/// Supersampled coverage of the union of residential footprints. Each point
/// is tested at (x + eps, y + eps) with the even-odd rule; overlapping
/// footprints never count twice and non-residential / unknown footprints
/// are ignored.
CoverageMask rasterize_coverage(const FootprintSet& footprints, const Box& tile_box, int side_px,
                                int supersample);

/// Mean coverage of the mask.
double occupancy_fraction(const CoverageMask& mask);

/// True when no two residential footprints touching the box can share
/// interior area. Pairs that are not both convex are treated as
/// overlapping whenever their bounding boxes overlap.
bool residential_footprints_disjoint(const FootprintSet& footprints, const Box& tile_box);

/// Summed clipped residential area over the box area. Falls back to a 16x
/// supersampled rasterization at `fallback_side_px` when the disjointness
/// check fails.
double exact_occupancy(const FootprintSet& footprints, const Box& tile_box, int fallback_side_px = 224);

/// 8-bit mask image, coverage * 255 rounded half-up.
Image mask_image(const CoverageMask& mask);

}  // namespace gridpop
