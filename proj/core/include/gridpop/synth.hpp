#pragma once

// Seeded synthetic settlements: imagery, tagged footprints and exact
// per-building population, plus the per-tile truth derived from them.

#include <cstdint>
#include <string>
#include <vector>

#include "gridpop/geodata.hpp"
#include "gridpop/tiler.hpp"

namespace gridpop {

enum class Rotation { axis_aligned, uniform };

struct SynthParams {
  std::string site_id = "synthetic";
  std::string crs_id = "EPSG:32631";
  double extent_w = 216.0;
  double extent_h = 216.0;
  double origin_x = 500000.0;  // world x of the west edge
  double origin_y = 800000.0;  // world y of the north edge
  double pixel_size_m = 0.25;
  int building_count = 60;
  double residential_fraction = 1.0 / 3.0;
  double size_min = 4.0;
  double size_max = 10.0;
  Rotation rotation = Rotation::axis_aligned;
  double persons_per_m2 = 0.1;
  int cloud_blob_count = 0;
  double cloud_radius_min = 4.0;
  double cloud_radius_max = 12.0;
  double noise_std = 6.0;
  /// When > 0, classes are drawn once per square block of this side and
  /// shared by every building whose center falls in the block; when 0 each
  /// building draws its own class.
  double cluster_cell_m = 0.0;
  std::uint64_t seed = 1;

  /// Throws Error(config) for invalid ranges.
  void validate() const;
  void set(std::string_view key, std::string_view value);
};

/// Parses a synth parameter file. Unnamed keys are shared defaults; each
/// `[site]` section yields one scene named after the section. Without
/// sections a single scene is returned.
std::vector<SynthParams> parse_synth_params(std::string_view text);

struct Scene {
  Raster raster;
  FootprintSet footprints;
  /// Persons per footprint, aligned with footprints.footprints.
  std::vector<double> persons;
  SynthParams params;

  double total_persons() const;
};

/// Rectangular buildings placed by rejection sampling without pairwise
/// overlap (at most 10^4 attempts per building, else Error(domain)).
/// Residential roofs and other roofs use distinct base colours plus
/// Gaussian noise; cloud blobs are ellipses of intensity >= 250.
Scene generate_settlement(const SynthParams& params);

struct TileTruth {
  Cell cell;
  double occupancy = 0.0;
  double population = 0.0;
};

/// Exact occupancy per tile plus each building's population split across
/// tiles in proportion to its clipped area.
std::vector<TileTruth> oracle_tile_truth(const Scene& scene, const TileGrid& grid);

std::string format_truth_jsonl(std::string_view site_id, const std::vector<TileTruth>& truth);

/// Base roof colours, exposed for tests.
inline constexpr std::uint8_t kResidentialRoof[3] = {176, 74, 52};
inline constexpr std::uint8_t kOtherRoof[3] = {112, 138, 170};
inline constexpr std::uint8_t kGround[3] = {150, 132, 104};

}  // namespace gridpop
