#include "gridpop/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "gridpop/config.hpp"
#include "gridpop/error.hpp"
#include "gridpop/random.hpp"
#include "gridpop/rasterizer.hpp"
#include "text.hpp"

namespace gridpop {

void SynthParams::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::config, "synth: " + why); };
  if (site_id.empty()) fail("site_id must not be empty");
  if (!(extent_w > 0.0 && extent_h > 0.0)) fail("extent must be positive");
  if (!(pixel_size_m > 0.0)) fail("pixel_size_m must be positive");
  if (building_count < 0) fail("building_count must be >= 0");
  if (!(residential_fraction >= 0.0 && residential_fraction <= 1.0)) fail("residential_fraction must lie in [0, 1]");
  if (!(size_min > 0.0 && size_min <= size_max)) fail("need 0 < size_min <= size_max");
  if (!(persons_per_m2 >= 0.0)) fail("persons_per_m2 must be >= 0");
  if (cloud_blob_count < 0) fail("cloud_blob_count must be >= 0");
  if (!(cloud_radius_min > 0.0 && cloud_radius_min <= cloud_radius_max)) fail("need 0 < cloud_radius_min <= cloud_radius_max");
  if (!(noise_std >= 0.0)) fail("noise_std must be >= 0");
  if (!(cluster_cell_m >= 0.0)) fail("cluster_cell_m must be >= 0");
}

void SynthParams::set(std::string_view key, std::string_view value) {
  auto number = [&]() {
    auto v = text::parse_double(value);
    if (!v) throw Error(ErrorKind::config, "synth: " + std::string(key) + " expects a number");
    return *v;
  };
  auto integer = [&]() {
    auto v = text::parse_int<long long>(value);
    if (!v) throw Error(ErrorKind::config, "synth: " + std::string(key) + " expects an integer");
    return *v;
  };
  if (key == "site_id") site_id = std::string(value);
  else if (key == "crs_id") crs_id = std::string(value);
  else if (key == "extent_w") extent_w = number();
  else if (key == "extent_h") extent_h = number();
  else if (key == "origin_x") origin_x = number();
  else if (key == "origin_y") origin_y = number();
  else if (key == "pixel_size_m") pixel_size_m = number();
  else if (key == "building_count") building_count = static_cast<int>(integer());
  else if (key == "residential_fraction") residential_fraction = number();
  else if (key == "size_min") size_min = number();
  else if (key == "size_max") size_max = number();
  else if (key == "rotation") {
    if (value == "axis_aligned") rotation = Rotation::axis_aligned;
    else if (value == "uniform") rotation = Rotation::uniform;
    else throw Error(ErrorKind::config, "synth: rotation must be axis_aligned or uniform");
  } else if (key == "persons_per_m2") persons_per_m2 = number();
  else if (key == "cloud_blob_count") cloud_blob_count = static_cast<int>(integer());
  else if (key == "cloud_radius_min") cloud_radius_min = number();
  else if (key == "cloud_radius_max") cloud_radius_max = number();
  else if (key == "noise_std") noise_std = number();
  else if (key == "cluster_cell_m") cluster_cell_m = number();
  else if (key == "seed") {
    auto v = text::parse_int<std::uint64_t>(value);
    if (!v) throw Error(ErrorKind::config, "synth: seed expects an unsigned integer");
    seed = *v;
  } else {
    throw Error(ErrorKind::config, "synth: unknown key '" + std::string(key) + "'");
  }
}

std::vector<SynthParams> parse_synth_params(std::string_view content) {
  const auto sections = parse_key_values(content);
  SynthParams base;
  for (const auto& [k, v] : sections.front().entries) base.set(k, v);
  std::vector<SynthParams> out;
  if (sections.size() == 1) {
    base.validate();
    out.push_back(base);
    return out;
  }
  for (std::size_t s = 1; s < sections.size(); ++s) {
    SynthParams p = base;
    p.site_id = sections[s].name;
    for (const auto& [k, v] : sections[s].entries) p.set(k, v);
    p.validate();
    out.push_back(std::move(p));
  }
  return out;
}

double Scene::total_persons() const {
  double sum = 0.0;
  for (double p : persons) sum += p;
  return sum;
}

namespace {

using Quad = std::array<Point, 4>;

// Strict interior overlap of two convex quads by separating axes; touching
// edges do not count.
bool quads_overlap(const Quad& a, const Quad& b) {
  auto separated = [](const Quad& p, const Quad& q) {
    for (std::size_t i = 0; i < 4; ++i) {
      const Point e{p[(i + 1) % 4].x - p[i].x, p[(i + 1) % 4].y - p[i].y};
      const Point axis{-e.y, e.x};
      double pmin = INFINITY, pmax = -INFINITY, qmin = INFINITY, qmax = -INFINITY;
      for (const Point& v : p) {
        const double d = v.x * axis.x + v.y * axis.y;
        pmin = std::min(pmin, d);
        pmax = std::max(pmax, d);
      }
      for (const Point& v : q) {
        const double d = v.x * axis.x + v.y * axis.y;
        qmin = std::min(qmin, d);
        qmax = std::max(qmax, d);
      }
      const double scale = std::hypot(axis.x, axis.y);
      if (std::min(pmax, qmax) - std::max(pmin, qmin) <= 1e-9 * scale) return true;
    }
    return false;
  };
  return !separated(a, b) && !separated(b, a);
}

struct Placed {
  Quad quad;
  double w;
  double h;
  Point center;  // local coordinates, origin at the south-west corner
};

class BucketIndex {
 public:
  explicit BucketIndex(double cell) : cell_(cell) {}

  bool collides(const Quad& q, Point center, const std::vector<Placed>& placed) const {
    const auto [bx, by] = bucket(center);
    for (long long dy = -1; dy <= 1; ++dy) {
      for (long long dx = -1; dx <= 1; ++dx) {
        auto it = buckets_.find(key(bx + dx, by + dy));
        if (it == buckets_.end()) continue;
        for (std::size_t idx : it->second) {
          if (quads_overlap(q, placed[idx].quad)) return true;
        }
      }
    }
    return false;
  }

  void insert(Point center, std::size_t idx) {
    const auto [bx, by] = bucket(center);
    buckets_[key(bx, by)].push_back(idx);
  }

 private:
  std::pair<long long, long long> bucket(Point p) const {
    return {static_cast<long long>(std::floor(p.x / cell_)), static_cast<long long>(std::floor(p.y / cell_))};
  }
  static std::uint64_t key(long long x, long long y) {
    return (static_cast<std::uint64_t>(x + (1LL << 31)) << 32) ^ static_cast<std::uint64_t>(y + (1LL << 31));
  }

  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

constexpr std::array<const char*, 6> kOtherTags = {"church", "school", "commercial", "shed", "mosque", "retail"};

std::uint8_t clamp_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

}  // namespace

Scene generate_settlement(const SynthParams& params) {
  params.validate();
  Rng rng(params.seed);
  Scene scene;
  scene.params = params;

  const int width = static_cast<int>(std::llround(params.extent_w / params.pixel_size_m));
  const int height = static_cast<int>(std::llround(params.extent_h / params.pixel_size_m));
  GeoTransform t{params.origin_x, params.origin_y, params.pixel_size_m, params.pixel_size_m, params.crs_id};
  scene.footprints.crs_id = params.crs_id;

  // Class blocks are drawn before any placement so the stream layout does
  // not depend on how many placement attempts were needed.
  std::vector<bool> block_residential;
  long long blocks_x = 0;
  if (params.cluster_cell_m > 0.0) {
    blocks_x = static_cast<long long>(std::ceil(params.extent_w / params.cluster_cell_m));
    const long long blocks_y = static_cast<long long>(std::ceil(params.extent_h / params.cluster_cell_m));
    block_residential.resize(static_cast<std::size_t>(blocks_x * blocks_y));
    for (std::size_t i = 0; i < block_residential.size(); ++i) {
      block_residential[i] = rng.bernoulli(params.residential_fraction);
    }
  }

  const double south = params.origin_y - params.extent_h;
  std::vector<Placed> placed;
  BucketIndex index(1.5 * params.size_max);
  for (int b = 0; b < params.building_count; ++b) {
    bool done = false;
    for (int attempt = 0; attempt < 10000 && !done; ++attempt) {
      const double w = rng.uniform(params.size_min, params.size_max);
      const double h = rng.uniform(params.size_min, params.size_max);
      const double theta = params.rotation == Rotation::uniform ? rng.uniform(0.0, std::numbers::pi / 2.0) : 0.0;
      const double cs = std::cos(theta), sn = std::sin(theta);
      const double ex = (w * cs + h * sn) / 2.0, ey = (w * sn + h * cs) / 2.0;
      const double cx = rng.uniform(ex, params.extent_w - ex);
      const double cy = rng.uniform(ey, params.extent_h - ey);
      if (2.0 * ex > params.extent_w || 2.0 * ey > params.extent_h) continue;
      Quad q;
      const std::array<Point, 4> offsets = {{{-w / 2, -h / 2}, {w / 2, -h / 2}, {w / 2, h / 2}, {-w / 2, h / 2}}};
      for (std::size_t k = 0; k < 4; ++k) {
        if (params.rotation == Rotation::axis_aligned) {
          q[k] = {cx + offsets[k].x, cy + offsets[k].y};
        } else {
          q[k] = {cx + offsets[k].x * cs - offsets[k].y * sn, cy + offsets[k].x * sn + offsets[k].y * cs};
        }
      }
      if (index.collides(q, {cx, cy}, placed)) continue;
      index.insert({cx, cy}, placed.size());
      placed.push_back({q, w, h, {cx, cy}});
      done = true;
    }
    if (!done) {
      throw Error(ErrorKind::domain, "placement failed for building " + std::to_string(b) +
                                         " after 10000 attempts; parameters too dense");
    }

    const Placed& p = placed.back();
    bool residential;
    if (params.cluster_cell_m > 0.0) {
      const long long bx = std::min(blocks_x - 1, static_cast<long long>(p.center.x / params.cluster_cell_m));
      const long long by = static_cast<long long>((params.extent_h - p.center.y) / params.cluster_cell_m);
      const std::size_t blk = static_cast<std::size_t>(std::clamp(by, 0LL, static_cast<long long>(block_residential.size()) / blocks_x - 1) * blocks_x + bx);
      residential = block_residential[blk];
    } else {
      residential = rng.bernoulli(params.residential_fraction);
    }
    const char* tag = residential ? "house" : kOtherTags[rng.below(kOtherTags.size())];

    Ring ring;
    for (const Point& v : p.quad) ring.push_back({params.origin_x + v.x, south + v.y});
    char id[32];
    std::snprintf(id, sizeof(id), "b%05d", b + 1);
    scene.footprints.footprints.push_back({id, make_polygon(std::move(ring)),
                                           residential ? ClassTag::residential : ClassTag::non_residential, tag});
    scene.persons.push_back(residential ? params.persons_per_m2 * p.w * p.h : 0.0);
  }

  struct Ellipse {
    Point c;
    double a, b, cs, sn;
  };
  std::vector<Ellipse> clouds;
  for (int k = 0; k < params.cloud_blob_count; ++k) {
    Ellipse e;
    e.c = {params.origin_x + rng.uniform(0.0, params.extent_w), south + rng.uniform(0.0, params.extent_h)};
    e.a = rng.uniform(params.cloud_radius_min, params.cloud_radius_max);
    e.b = rng.uniform(params.cloud_radius_min, params.cloud_radius_max);
    const double phi = rng.uniform(0.0, std::numbers::pi);
    e.cs = std::cos(phi);
    e.sn = std::sin(phi);
    clouds.push_back(e);
  }

  // 0 = ground, 1 = residential roof, 2 = other roof, 3 = cloud.
  std::vector<std::uint8_t> kind(static_cast<std::size_t>(width) * height, 0);
  auto pixel_center = [&](int x, int y) { return t.pixel_corner(x + 0.5, y + 0.5); };
  auto col_of = [&](double wx) { return (wx - t.origin_x) / t.pixel_w - 0.5; };
  auto row_of = [&](double wy) { return (t.origin_y - wy) / t.pixel_h - 0.5; };
  for (const Footprint& f : scene.footprints.footprints) {
    const Box bb = bounding_box(f.polygon);
    const int x0 = std::max(0, static_cast<int>(std::ceil(col_of(bb.x_min))));
    const int x1 = std::min(width - 1, static_cast<int>(std::floor(col_of(bb.x_max))));
    const int y0 = std::max(0, static_cast<int>(std::ceil(row_of(bb.y_max))));
    const int y1 = std::min(height - 1, static_cast<int>(std::floor(row_of(bb.y_min))));
    const std::uint8_t k = f.class_tag == ClassTag::residential ? 1 : 2;
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (contains(f.polygon, pixel_center(x, y))) kind[static_cast<std::size_t>(y) * width + x] = k;
      }
    }
  }
  for (const Ellipse& e : clouds) {
    const double r = std::max(e.a, e.b);
    const int x0 = std::max(0, static_cast<int>(std::ceil(col_of(e.c.x - r))));
    const int x1 = std::min(width - 1, static_cast<int>(std::floor(col_of(e.c.x + r))));
    const int y0 = std::max(0, static_cast<int>(std::ceil(row_of(e.c.y + r))));
    const int y1 = std::min(height - 1, static_cast<int>(std::floor(row_of(e.c.y - r))));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const Point p = pixel_center(x, y);
        const double dx = p.x - e.c.x, dy = p.y - e.c.y;
        const double u = (dx * e.cs + dy * e.sn) / e.a, v = (-dx * e.sn + dy * e.cs) / e.b;
        if (u * u + v * v <= 1.0) kind[static_cast<std::size_t>(y) * width + x] = 3;
      }
    }
  }

  Image img(width, height, 3);
  for (std::size_t i = 0; i < kind.size(); ++i) {
    if (kind[i] == 3) {
      for (int c = 0; c < 3; ++c) img.samples[3 * i + c] = static_cast<std::uint8_t>(250 + rng.below(6));
      continue;
    }
    const std::uint8_t* base = kind[i] == 1 ? kResidentialRoof : kind[i] == 2 ? kOtherRoof : kGround;
    for (int c = 0; c < 3; ++c) {
      const double noise = params.noise_std > 0.0 ? params.noise_std * rng.normal() : 0.0;
      img.samples[3 * i + c] = clamp_byte(base[c] + noise);
    }
  }
  scene.raster = make_raster(std::move(img), std::move(t));
  return scene;
}

std::vector<TileTruth> oracle_tile_truth(const Scene& scene, const TileGrid& grid) {
  const auto& fps = scene.footprints.footprints;
  std::vector<Box> boxes;
  std::vector<double> areas;
  for (const Footprint& f : fps) {
    boxes.push_back(bounding_box(f.polygon));
    areas.push_back(polygon_area(f.polygon));
  }
  std::vector<TileTruth> out;
  out.reserve(static_cast<std::size_t>(grid.cell_count()));
  for (int r = 0; r < grid.n_rows; ++r) {
    for (int c = 0; c < grid.n_cols; ++c) {
      const Box box = grid.cell_box({r, c});
      TileTruth t;
      t.cell = {r, c};
      t.occupancy = exact_occupancy(scene.footprints, box);
      for (std::size_t b = 0; b < fps.size(); ++b) {
        if (scene.persons[b] == 0.0 || !boxes_overlap(boxes[b], box)) continue;
        double inside = 0.0;
        for (const Polygon& piece : clip_polygon_to_box(fps[b].polygon, box)) inside += polygon_area(piece);
        t.population += scene.persons[b] * inside / areas[b];
      }
      out.push_back(t);
    }
  }
  return out;
}

std::string format_truth_jsonl(std::string_view site_id, const std::vector<TileTruth>& truth) {
  std::string out;
  for (const TileTruth& t : truth) {
    out += "{\"site_id\":\"" + std::string(site_id) + "\",\"row\":" + std::to_string(t.cell.row) +
           ",\"col\":" + std::to_string(t.cell.col) + ",\"occupancy\":" + text::shortest(t.occupancy) +
           ",\"population\":" + text::shortest(t.population) + "}\n";
  }
  return out;
}

}  // namespace gridpop
