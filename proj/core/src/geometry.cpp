#include "gridpop/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "gridpop/error.hpp"

namespace gridpop {
namespace {

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool within_bounds(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection test, touching counts.
bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  const int d1 = sign(cross(q1, q2, p1));
  const int d2 = sign(cross(q1, q2, p2));
  const int d3 = sign(cross(p1, p2, q1));
  const int d4 = sign(cross(p1, p2, q2));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && within_bounds(q1, q2, p1)) return true;
  if (d2 == 0 && within_bounds(q1, q2, p2)) return true;
  if (d3 == 0 && within_bounds(p1, p2, q1)) return true;
  if (d4 == 0 && within_bounds(p1, p2, q2)) return true;
  return false;
}

bool is_zero_area(std::span<const Point> ring) {
  const Box b = bounding_box(ring);
  const double scale = std::max(b.width(), b.height());
  return std::abs(signed_area(ring)) <= 1e-12 * scale * scale;
}

Ring reversed(Ring ring) {
  std::reverse(ring.begin(), ring.end());
  return ring;
}

template <typename Inside, typename Cut>
Ring clip_half_plane(const Ring& in, Inside inside, Cut cut) {
  Ring out;
  if (in.empty()) return out;
  out.reserve(in.size() + 4);
  Point prev = in.back();
  bool prev_in = inside(prev);
  for (const Point& cur : in) {
    const bool cur_in = inside(cur);
    if (cur_in) {
      if (!prev_in) out.push_back(cut(prev, cur));
      out.push_back(cur);
    } else if (prev_in) {
      out.push_back(cut(prev, cur));
    }
    prev = cur;
    prev_in = cur_in;
  }
  return out;
}

Ring clip_ring_to_box(const Ring& ring, const Box& box) {
  auto at_x = [](double x) {
    return [x](Point a, Point b) {
      return Point{x, a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x)};
    };
  };
  auto at_y = [](double y) {
    return [y](Point a, Point b) {
      return Point{a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y), y};
    };
  };
  Ring r = clip_half_plane(ring, [&](Point p) { return p.x >= box.x_min; }, at_x(box.x_min));
  r = clip_half_plane(r, [&](Point p) { return p.x <= box.x_max; }, at_x(box.x_max));
  r = clip_half_plane(r, [&](Point p) { return p.y >= box.y_min; }, at_y(box.y_min));
  r = clip_half_plane(r, [&](Point p) { return p.y <= box.y_max; }, at_y(box.y_max));
  return r;
}

// Degenerate leftovers (fewer than three vertices, no area) become empty.
Ring tidy(const Ring& ring) {
  Ring r = canonical_ring(ring);
  if (r.size() < 3 || signed_area(r) == 0.0) return {};
  return r;
}

}  // namespace

double signed_area(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  // Shoelace relative to the first vertex to limit cancellation for
  // projected coordinates with large offsets.
  const Point o = ring[0];
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    twice += cross(o, ring[i], ring[i + 1]);
  }
  return 0.5 * twice;
}

double polygon_area(const Polygon& polygon) {
  double area = std::abs(signed_area(polygon.exterior));
  for (const Ring& hole : polygon.holes) area -= std::abs(signed_area(hole));
  return area;
}

Box bounding_box(std::span<const Point> ring) {
  if (ring.empty()) return {};
  Box b{ring[0].x, ring[0].y, ring[0].x, ring[0].y};
  for (const Point& p : ring) {
    b.x_min = std::min(b.x_min, p.x);
    b.y_min = std::min(b.y_min, p.y);
    b.x_max = std::max(b.x_max, p.x);
    b.y_max = std::max(b.y_max, p.y);
  }
  return b;
}

Box bounding_box(const Polygon& polygon) { return bounding_box(polygon.exterior); }

bool boxes_overlap(const Box& a, const Box& b) {
  return a.x_min < b.x_max && b.x_min < a.x_max && a.y_min < b.y_max && b.y_min < a.y_max;
}

namespace {

bool crosses_ray(Point a, Point b, Point p) {
  if ((a.y > p.y) == (b.y > p.y)) return false;
  return p.x < a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
}

bool odd_crossings(std::span<const Point> ring, Point p) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (crosses_ray(ring[j], ring[i], p)) inside = !inside;
  }
  return inside;
}

}  // namespace

bool contains(std::span<const Point> ring, Point p) {
  if (ring.size() < 3) return false;
  return odd_crossings(ring, p);
}

bool contains(const Polygon& polygon, Point p) {
  bool inside = contains(polygon.exterior, p);
  for (const Ring& hole : polygon.holes) {
    if (hole.size() >= 3 && odd_crossings(hole, p)) inside = !inside;
  }
  return inside;
}

bool is_simple(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  auto at = [&](std::size_t i) { return ring[i % n]; };
  for (std::size_t i = 0; i < n; ++i) {
    // Adjacent edges (i, i+1) and (i+1, i+2) may only meet at their shared
    // vertex; a collinear fold-back overlaps.
    const Point a = at(i), v = at(i + 1), b = at(i + 2);
    if (cross(a, v, b) == 0.0 &&
        (a.x - v.x) * (b.x - v.x) + (a.y - v.y) * (b.y - v.y) > 0.0) {
      return false;
    }
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the closure
      if (segments_intersect(at(i), at(i + 1), at(j), at(j + 1))) return false;
    }
  }
  return true;
}

bool is_convex(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  int seen = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int s = sign(cross(ring[i], ring[(i + 1) % n], ring[(i + 2) % n]));
    if (s == 0) continue;
    if (seen == 0) {
      seen = s;
    } else if (s != seen) {
      return false;
    }
  }
  return seen != 0;
}

Ring canonical_ring(std::span<const Point> vertices) {
  Ring out;
  out.reserve(vertices.size());
  for (const Point& p : vertices) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

Polygon normalize_orientation(Polygon polygon) {
  if (signed_area(polygon.exterior) < 0.0) polygon.exterior = reversed(std::move(polygon.exterior));
  for (Ring& hole : polygon.holes) {
    if (signed_area(hole) > 0.0) hole = reversed(std::move(hole));
  }
  return polygon;
}

Polygon make_polygon(Ring exterior, std::vector<Ring> holes) {
  auto check_ring = [](const Ring& ring, const char* which) {
    if (ring.size() < 3) {
      throw Error(ErrorKind::geometry,
                  std::string(which) + " ring has fewer than 3 distinct vertices");
    }
    if (is_zero_area(ring)) throw Error(ErrorKind::geometry, std::string(which) + " ring has zero area");
    if (!is_simple(ring)) throw Error(ErrorKind::geometry, std::string(which) + " ring self-intersects");
  };

  Polygon polygon;
  polygon.exterior = canonical_ring(exterior);
  check_ring(polygon.exterior, "exterior");
  for (Ring& hole : holes) {
    Ring h = canonical_ring(hole);
    check_ring(h, "hole");
    for (const Point& p : h) {
      if (!contains(polygon.exterior, p)) {
        throw Error(ErrorKind::geometry, "hole ring lies outside the exterior ring");
      }
    }
    polygon.holes.push_back(std::move(h));
  }
  polygon = normalize_orientation(std::move(polygon));
  if (polygon_area(polygon) <= 0.0) throw Error(ErrorKind::geometry, "polygon has zero area");
  return polygon;
}

Ring box_ring(const Box& box) {
  return {{box.x_min, box.y_min}, {box.x_max, box.y_min}, {box.x_max, box.y_max}, {box.x_min, box.y_max}};
}

std::vector<Polygon> clip_polygon_to_box(const Polygon& polygon, const Box& box) {
  if (!(box.width() > 0.0 && box.height() > 0.0)) return {};
  if (!boxes_overlap(bounding_box(polygon), box)) return {};

  Polygon out;
  out.exterior = tidy(clip_ring_to_box(polygon.exterior, box));
  if (out.exterior.empty()) return {};
  for (const Ring& hole : polygon.holes) {
    Ring h = tidy(clip_ring_to_box(hole, box));
    if (!h.empty()) out.holes.push_back(std::move(h));
  }
  if (polygon_area(out) <= 1e-12 * box.area()) return {};
  return {std::move(out)};
}

Ring clip_ring_to_convex(std::span<const Point> subject, std::span<const Point> convex) {
  Ring r(subject.begin(), subject.end());
  const double orient = signed_area(convex) >= 0.0 ? 1.0 : -1.0;
  const std::size_t n = convex.size();
  for (std::size_t i = 0; i < n && !r.empty(); ++i) {
    const Point a = convex[i];
    const Point b = convex[(i + 1) % n];
    auto side = [&](Point p) { return orient * cross(a, b, p); };
    r = clip_half_plane(
        r, [&](Point p) { return side(p) >= 0.0; },
        [&](Point p, Point q) {
          const double dp = side(p);
          const double dq = side(q);
          const double t = dp / (dp - dq);
          return Point{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
        });
  }
  return tidy(r);
}

double convex_intersection_area(const Polygon& subject, std::span<const Point> convex) {
  double area = std::abs(signed_area(clip_ring_to_convex(subject.exterior, convex)));
  for (const Ring& hole : subject.holes) {
    area -= std::abs(signed_area(clip_ring_to_convex(hole, convex)));
  }
  return std::max(area, 0.0);
}

}  // namespace gridpop
