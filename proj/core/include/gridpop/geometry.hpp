#pragma once

// Planar polygon primitives in projected meter coordinates.
//
// Rings are stored open: the closing vertex is implied and never repeated.
// Polygons built through make_polygon() are validated and normalized
// (exterior counter-clockwise, holes clockwise); clipping results keep the
// orientation of their input rings.

#include <span>
#include <vector>

namespace gridpop {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

using Ring = std::vector<Point>;

/// Axis-aligned rectangle in world meters.
struct Box {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  Box translated(double dx, double dy) const {
    return {x_min + dx, y_min + dy, x_max + dx, y_max + dy};
  }

  friend bool operator==(const Box&, const Box&) = default;
};

struct Polygon {
  Ring exterior;
  std::vector<Ring> holes;

  friend bool operator==(const Polygon&, const Polygon&) = default;
};

/// Shoelace signed area; positive for counter-clockwise rings.
double signed_area(std::span<const Point> ring);

/// Exterior area minus hole areas.
double polygon_area(const Polygon& polygon);

Box bounding_box(std::span<const Point> ring);
Box bounding_box(const Polygon& polygon);

/// True when the boxes share a region of positive area.
bool boxes_overlap(const Box& a, const Box& b);

/// Even-odd containment over every ring of the polygon.
bool contains(const Polygon& polygon, Point p);
bool contains(std::span<const Point> ring, Point p);

/// False when any two non-adjacent edges touch or adjacent edges fold back.
bool is_simple(std::span<const Point> ring);

bool is_convex(std::span<const Point> ring);

/// Drops the repeated closing vertex and consecutive duplicates.
Ring canonical_ring(std::span<const Point> vertices);

/// Validates and normalizes a polygon. Throws Error(ErrorKind::geometry)
/// naming the violated rule: too few vertices, zero area, self-intersection,
/// or a hole outside the exterior.
Polygon make_polygon(Ring exterior, std::vector<Ring> holes = {});

/// Reorients rings (exterior CCW, holes CW). Idempotent.
Polygon normalize_orientation(Polygon polygon);

/// Sutherland-Hodgman against the four box edges, applied to the exterior
/// and to each hole. Returns an empty list when the intersection has zero
/// area, otherwise a single polygon (disconnected pieces stay joined by
/// zero-width seams along the box boundary, which carry no area).
std::vector<Polygon> clip_polygon_to_box(const Polygon& polygon, const Box& box);

/// Ring clipped to a convex ring of either orientation.
Ring clip_ring_to_convex(std::span<const Point> subject, std::span<const Point> convex);

/// Area of the intersection of two polygons when `convex` is convex.
double convex_intersection_area(const Polygon& subject, std::span<const Point> convex);

Ring box_ring(const Box& box);

}  // namespace gridpop
