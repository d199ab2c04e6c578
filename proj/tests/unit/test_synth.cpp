#include <gtest/gtest.h>

#include <cmath>

#include "gridpop/error.hpp"
#include "gridpop/rasterizer.hpp"
#include "gridpop/synth.hpp"
#include "support.hpp"

namespace gridpop {
namespace {

SynthParams small_params(std::uint64_t seed) {
  SynthParams p;
  p.extent_w = 108;
  p.extent_h = 72;
  p.pixel_size_m = 0.5;
  p.building_count = 50;
  p.rotation = Rotation::uniform;
  p.seed = seed;
  return p;
}

TEST(Synth, EmptyScene) {
  SynthParams p = small_params(1);
  p.building_count = 0;
  p.noise_std = 0;
  const Scene s = generate_settlement(p);
  EXPECT_TRUE(s.footprints.footprints.empty());
  EXPECT_EQ(s.total_persons(), 0.0);
  for (int i = 0; i < s.raster.width() * s.raster.height(); ++i) {
    for (int c = 0; c < 3; ++c) ASSERT_EQ(s.raster.image.samples[3 * i + c], kGround[c]);
  }
}

TEST(Synth, PersonsFromArea) {
  SynthParams p = small_params(2);
  p.building_count = 1;
  p.size_min = p.size_max = 6;
  p.residential_fraction = 1.0;
  p.persons_per_m2 = 0.5;
  const Scene s = generate_settlement(p);
  ASSERT_EQ(s.persons.size(), 1u);
  EXPECT_DOUBLE_EQ(s.persons[0], 18.0);
  EXPECT_NEAR(polygon_area(s.footprints.footprints[0].polygon), 36.0, 1e-9);
}

TEST(Synth, SameSeedSameBytes) {
  const Scene a = generate_settlement(small_params(3));
  const Scene b = generate_settlement(small_params(3));
  EXPECT_EQ(a.raster.image, b.raster.image);
  EXPECT_EQ(serialize_footprints(a.footprints, "building", a.persons),
            serialize_footprints(b.footprints, "building", b.persons));
  EXPECT_NE(generate_settlement(small_params(4)).raster.image, a.raster.image);
}

TEST(Synth, FootprintsInsideExtentAndDisjoint) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Scene s = generate_settlement(small_params(seed));
    const Box extent = s.raster.extent();
    const auto& fps = s.footprints.footprints;
    for (std::size_t i = 0; i < fps.size(); ++i) {
      const Box b = bounding_box(fps[i].polygon);
      EXPECT_GE(b.x_min, extent.x_min - 1e-9);
      EXPECT_LE(b.x_max, extent.x_max + 1e-9);
      EXPECT_GE(b.y_min, extent.y_min - 1e-9);
      EXPECT_LE(b.y_max, extent.y_max + 1e-9);
      for (std::size_t j = i + 1; j < fps.size(); ++j) {
        EXPECT_LE(convex_intersection_area(fps[i].polygon, fps[j].polygon.exterior), 1e-9);
      }
    }
  }
}

TEST(Synth, ClassBalanceIsBinomial) {
  SynthParams p;
  p.extent_w = p.extent_h = 600;
  p.pixel_size_m = 2.0;
  p.building_count = 3000;
  p.residential_fraction = 1.0 / 3.0;
  p.noise_std = 0;
  const Scene s = generate_settlement(p);
  const double n = static_cast<double>(s.footprints.footprints.size());
  const double k = static_cast<double>(s.footprints.count(ClassTag::residential));
  const double sigma = std::sqrt(n * p.residential_fraction * (1 - p.residential_fraction));
  EXPECT_LE(std::abs(k - n * p.residential_fraction), 3 * sigma);
}

TEST(Synth, RoofColoursMatchClasses) {
  SynthParams p = small_params(5);
  p.rotation = Rotation::axis_aligned;
  p.noise_std = 0;
  const Scene s = generate_settlement(p);
  const GeoTransform& t = s.raster.transform;
  for (const Footprint& f : s.footprints.footprints) {
    const Box b = bounding_box(f.polygon);
    const int x = static_cast<int>((0.5 * (b.x_min + b.x_max) - t.origin_x) / t.pixel_w);
    const int y = static_cast<int>((t.origin_y - 0.5 * (b.y_min + b.y_max)) / t.pixel_h);
    const auto* want = f.class_tag == ClassTag::residential ? kResidentialRoof : kOtherRoof;
    for (int c = 0; c < 3; ++c) EXPECT_EQ(s.raster.image.at(x, y, c), want[c]) << f.id;
    EXPECT_EQ(f.source_tag == "house", f.class_tag == ClassTag::residential);
  }
}

TEST(Synth, CloudsAreWhite) {
  SynthParams p = small_params(6);
  p.cloud_blob_count = 3;
  const Scene s = generate_settlement(p);
  const double ratio = [&] {
    std::size_t white = 0;
    for (std::size_t i = 0; i < s.raster.image.samples.size(); i += 3) {
      white += s.raster.image.samples[i] >= 250 && s.raster.image.samples[i + 1] >= 250 && s.raster.image.samples[i + 2] >= 250;
    }
    return static_cast<double>(white) / (s.raster.image.samples.size() / 3);
  }();
  EXPECT_GT(ratio, 0.0);
}

TEST(Synth, TooDenseFails) {
  SynthParams p = small_params(7);
  p.extent_w = p.extent_h = 20;
  p.building_count = 50;
  EXPECT_THROW(generate_settlement(p), Error);
}

TEST(Truth, TileSumsEqualBuildingSums) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Scene s = generate_settlement(small_params(seed));
    const TileGrid grid = build_grid(s.raster, 36.0);
    ASSERT_EQ(grid.cell_count(), 6);
    double sum = 0.0;
    for (const TileTruth& t : oracle_tile_truth(s, grid)) sum += t.population;
    EXPECT_NEAR(sum, s.total_persons(), 1e-9 * s.total_persons());
  }
}

TEST(Truth, WholeAndSplitBuildings) {
  SynthParams p;
  p.extent_w = 72;
  p.extent_h = 36;
  p.pixel_size_m = 0.5;
  p.building_count = 0;
  Scene s = generate_settlement(p);
  const double x0 = p.origin_x, y0 = p.origin_y - 36;
  s.footprints.footprints.push_back(testing::rect_footprint("inside", {x0 + 2, y0 + 2, x0 + 8, y0 + 8}));
  s.footprints.footprints.push_back(testing::rect_footprint("split", {x0 + 33, y0 + 20, x0 + 39, y0 + 30}));
  s.persons = {3.6, 6.0};
  const auto truth = oracle_tile_truth(s, build_grid(s.raster, 36.0));
  ASSERT_EQ(truth.size(), 2u);
  EXPECT_NEAR(truth[0].population, 3.6 + 3.0, 1e-12);
  EXPECT_NEAR(truth[1].population, 3.0, 1e-12);
  EXPECT_NEAR(truth[1].occupancy, 30.0 / 1296.0, 1e-12);
}

TEST(Params, FileWithSections) {
  const auto scenes = parse_synth_params("building_count = 5\nseed = 3\n[site-a]\n[site-b]\nseed = 4\nrotation = uniform\n");
  ASSERT_EQ(scenes.size(), 2u);
  EXPECT_EQ(scenes[0].site_id, "site-a");
  EXPECT_EQ(scenes[0].seed, 3u);
  EXPECT_EQ(scenes[1].seed, 4u);
  EXPECT_EQ(scenes[1].building_count, 5);
  EXPECT_EQ(scenes[1].rotation, Rotation::uniform);
  EXPECT_THROW(parse_synth_params("residential_fraction = 2\n"), Error);
  EXPECT_THROW(parse_synth_params("bogus = 1\n"), Error);
  EXPECT_THROW(parse_synth_params("size_min = 5\nsize_max = 4\n"), Error);
}

TEST(Truth, JsonLines) {
  const std::vector<TileTruth> t = {{{0, 1}, 0.5, 12.25}};
  EXPECT_EQ(format_truth_jsonl("s", t), "{\"site_id\":\"s\",\"row\":0,\"col\":1,\"occupancy\":0.5,\"population\":12.25}\n");
}

}  // namespace
}  // namespace gridpop
