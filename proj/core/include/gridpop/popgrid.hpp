#pragma once

// Dasymetric population grids.
//
// Counts are held in fixed point (2^-50 persons per unit, 128-bit) so that
// sums are exact in any order: the per-cell counts of a grid always add up
// to its total, and aggregation to coarser cells never changes the total.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gridpop/labeler.hpp"

namespace gridpop {

__extension__ typedef __int128 PersonQuanta;

/// Persons per fixed-point unit.
inline constexpr double kPersonQuantum = 0x1.0p-50;

enum class WeightMode { occupancy, probability, binary };

std::string_view to_string(WeightMode mode) noexcept;
WeightMode parse_weight_mode(std::string_view text);

/// Dense per-cell weights over a tile grid, row-major.
struct CellWeights {
  TileGrid grid;
  WeightMode mode = WeightMode::occupancy;
  std::vector<double> weights;
  /// False for cells with no manifest tile (for example cloud-filtered);
  /// such cells carry weight 0.
  std::vector<bool> present;
};

using ProbabilityFn = std::function<double(const LabeledTile&)>;

/// occupancy -> tile occupancy, binary -> tile label, probability ->
/// `probability(tile)`. Throws Error(domain) for an empty tile list, tiles
/// outside the grid, or a missing probability function.
CellWeights weights_from_tiles(const TileGrid& grid, std::span<const LabeledTile> tiles, WeightMode mode,
                               const ProbabilityFn& probability = {});

/// Weight 1 everywhere; the explicit fallback when no residential area exists.
CellWeights uniform_weights(const TileGrid& grid);

class PopulationGrid {
 public:
  int n_rows = 0;
  int n_cols = 0;
  WeightMode weight_mode = WeightMode::occupancy;
  std::vector<Box> cells;            // row-major
  std::vector<PersonQuanta> quanta;  // row-major
  std::vector<bool> flagged;         // row-major; true when built from absent cells
  PersonQuanta total_quanta = 0;

  double count(std::size_t i) const;
  double count(int row, int col) const { return count(static_cast<std::size_t>(row) * n_cols + col); }
  double total() const;
  std::vector<double> counts() const;
};

PersonQuanta to_quanta(double persons);
double from_quanta(PersonQuanta q);

/// count_i = total * w_i / sum(w), floored to the quantum; the last cell
/// with positive weight absorbs the remainder so the sum is exact. A zero
/// total yields an all-zero grid. Throws Error(domain) for negative or
/// non-finite inputs and when every weight is zero.
PopulationGrid disaggregate(double total, const CellWeights& weights);

/// Sums factor x factor blocks. Trailing rows/cols that do not fill a block
/// merge into the last full block (all cells merge into one when the grid
/// is smaller than the factor). Throws Error(domain) for factor < 1.
PopulationGrid aggregate(const PopulationGrid& grid, int factor);

/// CSV with header row,col,x_min,y_min,x_max,y_max,population.
std::string population_csv(const PopulationGrid& grid);

/// Cell polygons with `population` and `flagged` properties.
std::string population_geojson(const PopulationGrid& grid);

}  // namespace gridpop
