#include <gtest/gtest.h>

#include <cmath>

#include "gridpop/error.hpp"
#include "gridpop/geometry.hpp"
#include "support.hpp"

namespace gridpop {
namespace {

using testing::random_star_ring;

// Crossing-number test written independently of the library.
bool oracle_inside(const Ring& ring, Point p) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = ring[i], b = ring[j];
    if ((a.y > p.y) == (b.y > p.y)) continue;
    const double t = (p.y - a.y) / (b.y - a.y);
    if (p.x < a.x + t * (b.x - a.x)) inside = !inside;
  }
  return inside;
}

Polygon unit_square() { return make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

TEST(PolygonArea, UnitSquare) { EXPECT_DOUBLE_EQ(polygon_area(unit_square()), 1.0); }

TEST(PolygonArea, SquareWithCenteredHole) {
  const Polygon p = make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}}});
  EXPECT_DOUBLE_EQ(polygon_area(p), 0.75);
}

TEST(PolygonArea, OrientationDoesNotMatter) {
  const Polygon cw = make_polygon({{0, 0}, {0, 2}, {3, 2}, {3, 0}});
  EXPECT_DOUBLE_EQ(polygon_area(cw), 6.0);
  EXPECT_GT(signed_area(cw.exterior), 0.0);
}

TEST(PolygonArea, RandomTwelveGonMatchesMonteCarlo) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    const Ring ring = random_star_ring(rng, 12, {50.0, -20.0}, 2.0, 10.0);
    const Polygon poly = make_polygon(ring);
    const Box bb = bounding_box(poly);
    constexpr int kSamples = 1'000'000;
    Rng mc(1000 + seed);
    int hits = 0;
    for (int i = 0; i < kSamples; ++i) {
      const Point p{mc.uniform(bb.x_min, bb.x_max), mc.uniform(bb.y_min, bb.y_max)};
      hits += oracle_inside(ring, p);
    }
    const double frac = static_cast<double>(hits) / kSamples;
    const double estimate = frac * bb.area();
    const double sigma = bb.area() * std::sqrt(frac * (1.0 - frac) / kSamples);
    EXPECT_LE(std::abs(polygon_area(poly) - estimate), 3.0 * sigma) << "seed " << seed;
  }
}

TEST(Contains, AgreesWithIndependentCrossingTest) {
  Rng rng(7);
  for (int k = 0; k < 20; ++k) {
    const Ring ring = random_star_ring(rng, 3 + static_cast<int>(rng.below(15)), {0.0, 0.0}, 1.0, 5.0);
    const Polygon poly = make_polygon(ring);
    for (int i = 0; i < 2000; ++i) {
      const Point p{rng.uniform(-6, 6), rng.uniform(-6, 6)};
      ASSERT_EQ(contains(poly, p), oracle_inside(poly.exterior, p));
    }
  }
}

TEST(Contains, HoleIsOutside) {
  const Polygon p = make_polygon({{0, 0}, {4, 0}, {4, 4}, {0, 4}}, {{{1, 1}, {3, 1}, {3, 3}, {1, 3}}});
  EXPECT_TRUE(contains(p, {0.5, 0.5}));
  EXPECT_FALSE(contains(p, {2, 2}));
  EXPECT_FALSE(contains(p, {5, 2}));
}

TEST(MakePolygon, RejectsBowtie) {
  try {
    make_polygon({{0, 0}, {2, 2}, {2, 0}, {0, 3}});
    FAIL() << "bowtie accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::geometry);
    EXPECT_NE(std::string(e.what()).find("self-intersects"), std::string::npos);
  }
}

TEST(MakePolygon, RejectsDegenerateRings) {
  EXPECT_THROW(make_polygon({{0, 0}, {1, 0}}), Error);
  EXPECT_THROW(make_polygon({{0, 0}, {1, 0}, {2, 0}}), Error);
  EXPECT_THROW(make_polygon({{0, 0}, {1, 0}, {1, 0}, {0, 0}}), Error);
}

TEST(MakePolygon, RejectsHoleOutsideExterior) {
  EXPECT_THROW(make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{2, 2}, {3, 2}, {3, 3}, {2, 3}}}), Error);
}

TEST(Normalization, IsIdempotent) {
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    Ring ring = random_star_ring(rng, 8, {0, 0}, 1, 3);
    if (k % 2) std::reverse(ring.begin(), ring.end());
    ring.push_back(ring.front());
    const Ring once = canonical_ring(ring);
    EXPECT_EQ(canonical_ring(once), once);
    const Polygon p = normalize_orientation({once, {}});
    EXPECT_EQ(normalize_orientation(p), p);
    EXPECT_GT(signed_area(p.exterior), 0.0);
  }
}

TEST(Clip, InsideBoxIsUnchanged) {
  const Polygon p = make_polygon({{1, 1}, {3, 1}, {2, 3}});
  const auto out = clip_polygon_to_box(p, {0, 0, 10, 10});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_DOUBLE_EQ(polygon_area(out[0]), polygon_area(p));
}

TEST(Clip, DisjointIsEmpty) {
  EXPECT_TRUE(clip_polygon_to_box(unit_square(), {5, 5, 6, 6}).empty());
}

TEST(Clip, TouchingEdgeIsEmpty) {
  EXPECT_TRUE(clip_polygon_to_box(unit_square(), {1, 0, 2, 1}).empty());
}

TEST(Clip, HalfInsideRectangleHalvesArea) {
  const Polygon rect = make_polygon({{0, 0}, {2, 0}, {2, 1}, {0, 1}});
  const auto out = clip_polygon_to_box(rect, {1, -5, 10, 5});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_DOUBLE_EQ(polygon_area(out[0]), polygon_area(rect) / 2.0);
}

TEST(Clip, HoleIsHonored) {
  const Polygon p = make_polygon({{0, 0}, {4, 0}, {4, 4}, {0, 4}}, {{{1, 1}, {3, 1}, {3, 3}, {1, 3}}});
  const auto out = clip_polygon_to_box(p, {0, 0, 2, 4});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NEAR(polygon_area(out[0]), 8.0 - 2.0, 1e-12);
}

double clipped_area(const Polygon& p, const Box& b) {
  if (!(b.width() > 0.0 && b.height() > 0.0)) return 0.0;
  double a = 0.0;
  for (const Polygon& piece : clip_polygon_to_box(p, b)) a += polygon_area(piece);
  return a;
}

TEST(Clip, BoxAndComplementStripsPartitionTheArea) {
  Rng rng(11);
  for (int k = 0; k < 500; ++k) {
    Polygon p;
    if (k % 2) {
      const double x = rng.uniform(-10, 10), y = rng.uniform(-10, 10);
      p = make_polygon(box_ring({x, y, x + rng.uniform(0.1, 8), y + rng.uniform(0.1, 8)}));
    } else {
      p = make_polygon(random_star_ring(rng, 10, {rng.uniform(-3, 3), rng.uniform(-3, 3)}, 1, 6));
    }
    const Box bb = bounding_box(p);
    const double x0 = rng.uniform(-12, 12), y0 = rng.uniform(-12, 12);
    const Box b{x0, y0, x0 + rng.uniform(0.5, 10), y0 + rng.uniform(0.5, 10)};
    const double xl = std::max(b.x_min, bb.x_min), xr = std::min(b.x_max, bb.x_max);
    const double total = clipped_area(p, b) + clipped_area(p, {bb.x_min, bb.y_min, std::min(b.x_min, bb.x_max), bb.y_max}) +
                         clipped_area(p, {std::max(b.x_max, bb.x_min), bb.y_min, bb.x_max, bb.y_max}) +
                         clipped_area(p, {xl, bb.y_min, xr, std::min(b.y_min, bb.y_max)}) +
                         clipped_area(p, {xl, std::max(b.y_max, bb.y_min), xr, bb.y_max});
    EXPECT_NEAR(total, polygon_area(p), 1e-9 * polygon_area(p)) << "case " << k;
  }
}

TEST(Convex, Detection) {
  EXPECT_TRUE(is_convex(unit_square().exterior));
  EXPECT_FALSE(is_convex(make_polygon({{0, 0}, {4, 0}, {4, 4}, {2, 1}, {0, 4}}).exterior));
}

TEST(Convex, IntersectionAreaMatchesBoxClip) {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const Polygon p = make_polygon(random_star_ring(rng, 9, {0, 0}, 1, 4));
    const double x0 = rng.uniform(-4, 2), y0 = rng.uniform(-4, 2);
    const Box b{x0, y0, x0 + rng.uniform(0.5, 4), y0 + rng.uniform(0.5, 4)};
    EXPECT_NEAR(convex_intersection_area(p, box_ring(b)), clipped_area(p, b), 1e-9);
  }
}

TEST(Boxes, OverlapNeedsPositiveArea) {
  EXPECT_TRUE(boxes_overlap({0, 0, 2, 2}, {1, 1, 3, 3}));
  EXPECT_FALSE(boxes_overlap({0, 0, 1, 1}, {1, 0, 2, 1}));
}

}  // namespace
}  // namespace gridpop
