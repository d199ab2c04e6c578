#include <gtest/gtest.h>

#include <numeric>

#include "gridpop/error.hpp"
#include "gridpop/popgrid.hpp"
#include "support.hpp"

namespace gridpop {
namespace {

TileGrid grid_of(int rows, int cols) {
  TileGrid g;
  g.origin_x = 500000;
  g.origin_y = 800000;
  g.tile_size_m = 36;
  g.n_rows = rows;
  g.n_cols = cols;
  return g;
}

CellWeights weights_of(int rows, int cols, std::vector<double> w) {
  CellWeights cw;
  cw.grid = grid_of(rows, cols);
  cw.weights = std::move(w);
  cw.present.assign(cw.weights.size(), true);
  return cw;
}

PersonQuanta quanta_sum(const PopulationGrid& g) {
  PersonQuanta s = 0;
  for (PersonQuanta q : g.quanta) s += q;
  return s;
}

TEST(Disaggregate, EqualWeights) {
  const PopulationGrid g = disaggregate(100, weights_of(2, 2, {1, 1, 1, 1}));
  for (double c : g.counts()) EXPECT_EQ(c, 25.0);
}

TEST(Disaggregate, ProportionalWeights) {
  const PopulationGrid g = disaggregate(1000, weights_of(1, 3, {0.3, 0.1, 0.6}));
  EXPECT_NEAR(g.count(0), 300.0, 1e-9);
  EXPECT_NEAR(g.count(1), 100.0, 1e-9);
  EXPECT_NEAR(g.count(2), 600.0, 1e-9);
  EXPECT_EQ(quanta_sum(g), to_quanta(1000));
}

TEST(Disaggregate, ZeroTotalGivesZeroGrid) {
  const PopulationGrid g = disaggregate(0, weights_of(2, 2, {0, 0, 0, 0}));
  for (double c : g.counts()) EXPECT_EQ(c, 0.0);
}

TEST(Disaggregate, AllZeroWeightsIsAnError) {
  EXPECT_THROW(disaggregate(10, weights_of(1, 2, {0, 0})), Error);
  const PopulationGrid g = disaggregate(10, uniform_weights(grid_of(1, 2)));
  EXPECT_EQ(g.count(0), 5.0);
}

TEST(Disaggregate, InvalidInputs) {
  EXPECT_THROW(disaggregate(-1, weights_of(1, 1, {1})), Error);
  EXPECT_THROW(disaggregate(std::nan(""), weights_of(1, 1, {1})), Error);
  EXPECT_THROW(disaggregate(1, weights_of(1, 2, {1, -0.5})), Error);
  EXPECT_THROW(disaggregate(1, weights_of(1, 2, {1})), Error);
}

TEST(Disaggregate, ResidualGoesToLastPositiveCell) {
  const PopulationGrid g = disaggregate(1, weights_of(1, 4, {1, 1, 1, 0}));
  EXPECT_EQ(g.quanta[3], 0);
  EXPECT_EQ(g.quanta[0], g.quanta[1]);
  EXPECT_GE(g.quanta[2], g.quanta[0]);
  EXPECT_EQ(quanta_sum(g), to_quanta(1));
}

TEST(Aggregate, IdentityAndBlockSum) {
  const PopulationGrid g = disaggregate(10, weights_of(2, 2, {1, 2, 3, 4}));
  EXPECT_EQ(aggregate(g, 1).quanta, g.quanta);
  const PopulationGrid c = aggregate(g, 2);
  ASSERT_EQ(c.quanta.size(), 1u);
  EXPECT_NEAR(c.count(0), 10.0, 1e-12);
  EXPECT_EQ(c.cells[0].x_min, g.cells[0].x_min);
  EXPECT_EQ(c.cells[0].y_min, g.cells[3].y_min);
  EXPECT_THROW(aggregate(g, 0), Error);
}

TEST(Aggregate, TrailingCellsMergeIntoLastBlock) {
  const PopulationGrid g = disaggregate(70, weights_of(1, 7, {1, 1, 1, 1, 1, 1, 1}));
  const PopulationGrid c = aggregate(g, 3);
  ASSERT_EQ(c.n_cols, 2);
  EXPECT_NEAR(c.count(0), 30.0, 1e-9);
  EXPECT_NEAR(c.count(1), 40.0, 1e-9);
}

TEST(Aggregate, FlagsPropagate) {
  CellWeights w = weights_of(2, 2, {1, 0, 1, 1});
  w.present[1] = false;
  const PopulationGrid g = disaggregate(3, w);
  EXPECT_TRUE(g.flagged[1]);
  EXPECT_TRUE(aggregate(g, 2).flagged[0]);
}

TEST(Properties, ConservationUnderFactorChains) {
  Rng rng(31);
  for (int k = 0; k < 300; ++k) {
    const int rows = 1 + static_cast<int>(rng.below(12)), cols = 1 + static_cast<int>(rng.below(12));
    std::vector<double> w(static_cast<std::size_t>(rows * cols));
    for (double& v : w) v = rng.bernoulli(0.3) ? 0.0 : rng.uniform() * std::pow(10.0, rng.uniform(-6, 6));
    w[rng.below(w.size())] = rng.uniform(0.01, 1.0);
    const double total = std::floor(rng.uniform(0, 1e7) * 1000) / 1000;
    PopulationGrid g = disaggregate(total, weights_of(rows, cols, w));
    ASSERT_EQ(quanta_sum(g), to_quanta(total));
    for (int step = 0; step < 3; ++step) {
      g = aggregate(g, 1 + static_cast<int>(rng.below(4)));
      ASSERT_EQ(quanta_sum(g), to_quanta(total));
      ASSERT_EQ(g.total_quanta, to_quanta(total));
    }
  }
}

TEST(Properties, AggregationAssociatesOnDivisibleGrids) {
  Rng rng(32);
  std::vector<double> w(144);
  for (double& v : w) v = rng.uniform();
  const PopulationGrid g = disaggregate(5000, weights_of(12, 12, w));
  EXPECT_EQ(aggregate(aggregate(g, 2), 3).quanta, aggregate(g, 6).quanta);
  EXPECT_EQ(aggregate(aggregate(g, 3), 2).quanta, aggregate(g, 6).quanta);
}

TEST(Properties, ScaleInvariance) {
  Rng rng(33);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> w(20);
    for (double& v : w) v = rng.uniform();
    const double total = rng.uniform(1, 1e6);
    const PopulationGrid a = disaggregate(total, weights_of(4, 5, w));
    for (double c : {1e-3, 7.0, 1e5}) {
      std::vector<double> scaled = w;
      for (double& v : scaled) v *= c;
      const PopulationGrid b = disaggregate(total, weights_of(4, 5, scaled));
      for (std::size_t i = 0; i < w.size(); ++i) ASSERT_NEAR(b.count(i), a.count(i), 1e-12 * total);
    }
  }
}

TEST(Properties, MonotoneInOwnWeight) {
  Rng rng(34);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> w(9);
    for (double& v : w) v = rng.uniform();
    const std::size_t i = rng.below(9);
    const PopulationGrid before = disaggregate(1000, weights_of(3, 3, w));
    w[i] += rng.uniform(0, 2);
    const PopulationGrid after = disaggregate(1000, weights_of(3, 3, w));
    ASSERT_GE(after.quanta[i], before.quanta[i]);
  }
}

TEST(Weights, FromTiles) {
  const TileGrid g = grid_of(1, 3);
  std::vector<LabeledTile> tiles(3);
  const double occ[] = {0.4, 0.1, 0.5};
  for (int c = 0; c < 3; ++c) {
    tiles[c].cell = {0, c};
    tiles[c].occupancy = occ[c];
    tiles[c].label = c != 1;
  }
  EXPECT_EQ(weights_from_tiles(g, tiles, WeightMode::occupancy).weights, (std::vector<double>{0.4, 0.1, 0.5}));
  EXPECT_EQ(weights_from_tiles(g, tiles, WeightMode::binary).weights, (std::vector<double>{1, 0, 1}));
  const auto p = weights_from_tiles(g, tiles, WeightMode::probability, [](const LabeledTile& t) { return t.occupancy * 2; });
  EXPECT_EQ(p.weights[2], 1.0);
  EXPECT_THROW(weights_from_tiles(g, tiles, WeightMode::probability), Error);

  tiles.erase(tiles.begin() + 1);
  const CellWeights missing = weights_from_tiles(g, tiles, WeightMode::occupancy);
  EXPECT_EQ(missing.weights[1], 0.0);
  EXPECT_FALSE(missing.present[1]);
}

TEST(Output, CsvLayout) {
  const PopulationGrid g = disaggregate(3, weights_of(1, 2, {1, 2}));
  const std::string csv = population_csv(g);
  EXPECT_EQ(csv,
            "row,col,x_min,y_min,x_max,y_max,population\n"
            "0,0,500000.000000,799964.000000,500036.000000,800000.000000,1.000\n"
            "0,1,500036.000000,799964.000000,500072.000000,800000.000000,2.000\n");
  EXPECT_NE(population_geojson(g).find("\"population\""), std::string::npos);
}

}  // namespace
}  // namespace gridpop
