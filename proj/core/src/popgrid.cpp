#include "gridpop/popgrid.hpp"

#include <cmath>

#include "gridpop/error.hpp"
#include "json.hpp"
#include "text.hpp"

namespace gridpop {

std::string_view to_string(WeightMode mode) noexcept {
  switch (mode) {
    case WeightMode::occupancy: return "occupancy";
    case WeightMode::probability: return "probability";
    case WeightMode::binary: return "binary";
  }
  return "occupancy";
}

WeightMode parse_weight_mode(std::string_view text) {
  if (text == "occupancy") return WeightMode::occupancy;
  if (text == "probability") return WeightMode::probability;
  if (text == "binary") return WeightMode::binary;
  throw Error(ErrorKind::config, "weight mode must be occupancy, probability or binary");
}

CellWeights weights_from_tiles(const TileGrid& grid, std::span<const LabeledTile> tiles, WeightMode mode,
                               const ProbabilityFn& probability) {
  if (tiles.empty()) throw Error(ErrorKind::domain, "no tiles to derive weights from");
  if (mode == WeightMode::probability && !probability) {
    throw Error(ErrorKind::domain, "probability weights need a model");
  }
  CellWeights w;
  w.grid = grid;
  w.mode = mode;
  w.weights.assign(static_cast<std::size_t>(grid.cell_count()), 0.0);
  w.present.assign(static_cast<std::size_t>(grid.cell_count()), false);
  for (const LabeledTile& t : tiles) {
    if (!grid.contains(t.cell)) throw Error(ErrorKind::domain, "tile outside the population grid");
    const std::size_t i = static_cast<std::size_t>(t.cell.row) * grid.n_cols + t.cell.col;
    switch (mode) {
      case WeightMode::occupancy: w.weights[i] = t.occupancy; break;
      case WeightMode::binary: w.weights[i] = t.label; break;
      case WeightMode::probability: w.weights[i] = probability(t); break;
    }
    w.present[i] = true;
  }
  return w;
}

CellWeights uniform_weights(const TileGrid& grid) {
  CellWeights w;
  w.grid = grid;
  w.weights.assign(static_cast<std::size_t>(grid.cell_count()), 1.0);
  w.present.assign(static_cast<std::size_t>(grid.cell_count()), true);
  return w;
}

PersonQuanta to_quanta(double persons) {
  if (!std::isfinite(persons) || persons < 0.0) throw Error(ErrorKind::domain, "population must be finite and >= 0");
  if (persons > 1e22) throw Error(ErrorKind::domain, "population total too large");
  return static_cast<PersonQuanta>(std::roundl(static_cast<long double>(persons) / kPersonQuantum));
}

double from_quanta(PersonQuanta q) {
  return static_cast<double>(static_cast<long double>(q) * kPersonQuantum);
}

double PopulationGrid::count(std::size_t i) const { return from_quanta(quanta[i]); }
double PopulationGrid::total() const { return from_quanta(total_quanta); }

std::vector<double> PopulationGrid::counts() const {
  std::vector<double> out(quanta.size());
  for (std::size_t i = 0; i < quanta.size(); ++i) out[i] = count(i);
  return out;
}

PopulationGrid disaggregate(double total, const CellWeights& w) {
  const std::size_t n = w.weights.size();
  if (n != static_cast<std::size_t>(w.grid.cell_count())) throw Error(ErrorKind::domain, "weights do not match grid");
  const PersonQuanta total_q = to_quanta(total);

  PopulationGrid g;
  g.n_rows = w.grid.n_rows;
  g.n_cols = w.grid.n_cols;
  g.weight_mode = w.mode;
  g.total_quanta = total_q;
  g.quanta.assign(n, 0);
  g.cells.reserve(n);
  g.flagged.assign(n, false);
  for (int r = 0; r < g.n_rows; ++r) {
    for (int c = 0; c < g.n_cols; ++c) g.cells.push_back(w.grid.cell_box({r, c}));
  }
  for (std::size_t i = 0; i < n && i < w.present.size(); ++i) g.flagged[i] = !w.present[i];

  long double weight_sum = 0.0L;
  std::size_t last = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = w.weights[i];
    if (!std::isfinite(v) || v < 0.0) throw Error(ErrorKind::domain, "weights must be finite and >= 0");
    weight_sum += v;
    if (v > 0.0) last = i;
  }
  if (total_q == 0) return g;
  if (last == n) {
    throw Error(ErrorKind::domain, "all weights are zero: no residential area detected; "
                                   "use uniform weights explicitly");
  }

  PersonQuanta assigned = 0;
  for (std::size_t i = 0; i < last; ++i) {
    if (w.weights[i] == 0.0) continue;
    const long double share = static_cast<long double>(total_q) * (w.weights[i] / weight_sum);
    g.quanta[i] = static_cast<PersonQuanta>(std::floor(share));
    assigned += g.quanta[i];
  }
  if (assigned > total_q) throw Error(ErrorKind::domain, "allocation overflow");
  g.quanta[last] = total_q - assigned;
  return g;
}

PopulationGrid aggregate(const PopulationGrid& grid, int factor) {
  if (factor < 1) throw Error(ErrorKind::domain, "aggregation factor must be >= 1");
  if (factor == 1) return grid;
  PopulationGrid out;
  out.n_rows = std::max(1, grid.n_rows / factor);
  out.n_cols = std::max(1, grid.n_cols / factor);
  out.weight_mode = grid.weight_mode;
  out.total_quanta = grid.total_quanta;
  const std::size_t n = static_cast<std::size_t>(out.n_rows) * out.n_cols;
  out.quanta.assign(n, 0);
  out.flagged.assign(n, false);
  std::vector<bool> seen(n, false);
  out.cells.assign(n, Box{});
  for (int r = 0; r < grid.n_rows; ++r) {
    const int cr = std::min(r / factor, out.n_rows - 1);
    for (int c = 0; c < grid.n_cols; ++c) {
      const int cc = std::min(c / factor, out.n_cols - 1);
      const std::size_t fine = static_cast<std::size_t>(r) * grid.n_cols + c;
      const std::size_t coarse = static_cast<std::size_t>(cr) * out.n_cols + cc;
      out.quanta[coarse] += grid.quanta[fine];
      out.flagged[coarse] = out.flagged[coarse] || grid.flagged[fine];
      const Box& b = grid.cells[fine];
      Box& dst = out.cells[coarse];
      if (!seen[coarse]) {
        dst = b;
        seen[coarse] = true;
      } else {
        dst = {std::min(dst.x_min, b.x_min), std::min(dst.y_min, b.y_min), std::max(dst.x_max, b.x_max),
               std::max(dst.y_max, b.y_max)};
      }
    }
  }
  return out;
}

std::string population_csv(const PopulationGrid& grid) {
  std::string out = "row,col,x_min,y_min,x_max,y_max,population\n";
  for (int r = 0; r < grid.n_rows; ++r) {
    for (int c = 0; c < grid.n_cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * grid.n_cols + c;
      const Box& b = grid.cells[i];
      out += std::to_string(r) + "," + std::to_string(c) + "," + text::fixed(b.x_min, 6) + "," +
             text::fixed(b.y_min, 6) + "," + text::fixed(b.x_max, 6) + "," + text::fixed(b.y_max, 6) + "," +
             text::fixed(grid.count(i), 3) + "\n";
    }
  }
  return out;
}

std::string population_geojson(const PopulationGrid& grid) {
  using json = nlohmann::json;
  json features = json::array();
  for (int r = 0; r < grid.n_rows; ++r) {
    for (int c = 0; c < grid.n_cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * grid.n_cols + c;
      const Box& b = grid.cells[i];
      json ring = json::array({json::array({b.x_min, b.y_min}), json::array({b.x_max, b.y_min}),
                               json::array({b.x_max, b.y_max}), json::array({b.x_min, b.y_max}),
                               json::array({b.x_min, b.y_min})});
      features.push_back({{"type", "Feature"},
                          {"properties",
                           {{"row", r}, {"col", c}, {"population", grid.count(i)}, {"flagged", bool(grid.flagged[i])}}},
                          {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring})}}}});
    }
  }
  json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
  return doc.dump() + "\n";
}

}  // namespace gridpop
