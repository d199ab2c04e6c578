#include <benchmark/benchmark.h>

#include <cmath>

#include "gridpop/classifier.hpp"
#include "gridpop/random.hpp"
#include "gridpop/rasterizer.hpp"
#include "gridpop/synth.hpp"
#include "gridpop/tiler.hpp"

namespace {

using namespace gridpop;

Scene bench_scene() {
  SynthParams p;
  p.extent_w = p.extent_h = 72.0;
  p.pixel_size_m = 36.0 / 56.0;
  p.building_count = 60;
  p.rotation = Rotation::uniform;
  p.seed = 17;
  return generate_settlement(p);
}

void BM_Rasterize(benchmark::State& state) {
  const Scene s = bench_scene();
  const TileGrid grid = build_grid(s.raster, 36.0);
  const Box box = grid.cell_box({0, 0});
  const int ss = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rasterize_coverage(s.footprints, box, 224, ss));
}
BENCHMARK(BM_Rasterize)->Arg(1)->Arg(4);

void BM_ExactOccupancy(benchmark::State& state) {
  const Scene s = bench_scene();
  const Box box = build_grid(s.raster, 36.0).cell_box({1, 1});
  for (auto _ : state) benchmark::DoNotOptimize(exact_occupancy(s.footprints, box));
}
BENCHMARK(BM_ExactOccupancy);

void BM_Resample(benchmark::State& state) {
  const int src = static_cast<int>(state.range(0));
  Image block(src, src, 3);
  Rng rng(3);
  for (auto& v : block.samples) v = static_cast<std::uint8_t>(rng.below(256));
  for (auto _ : state) benchmark::DoNotOptimize(resample_area(block, 224));
}
BENCHMARK(BM_Resample)->Arg(56)->Arg(1800);

void BM_ClipPolygon(benchmark::State& state) {
  Rng rng(5);
  Ring ring;
  const int n = static_cast<int>(state.range(0));
  for (int i = 0; i < n; ++i) {
    const double a = 6.283185307179586 * i / n;
    const double r = rng.uniform(5.0, 10.0);
    ring.push_back({r * std::cos(a), r * std::sin(a)});
  }
  const Polygon poly = make_polygon(canonical_ring(ring));
  const Box box{-4.0, -4.0, 6.0, 6.0};
  for (auto _ : state) benchmark::DoNotOptimize(clip_polygon_to_box(poly, box));
}
BENCHMARK(BM_ClipPolygon)->Arg(12)->Arg(200);

void BM_Train(benchmark::State& state) {
  Rng rng(9);
  std::vector<Example> data(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i].label = i % 3 == 0;
    for (int j = 0; j < 14; ++j) data[i].features.push_back(rng.normal() + (data[i].label ? 0.5 : 0.0));
  }
  for (auto _ : state) benchmark::DoNotOptimize(train_logistic(data, 0.5, 200, 1, "bench"));
}
BENCHMARK(BM_Train)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
