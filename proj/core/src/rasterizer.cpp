#include "gridpop/rasterizer.hpp"

#include <algorithm>
#include <cmath>

#include "gridpop/error.hpp"

namespace gridpop {
namespace {

struct Edge {
  Point a;
  Point b;
};

struct EdgeSet {
  Box bbox;
  std::vector<Edge> edges;
};

// Edges in the same (previous, current) vertex order that contains() uses,
// so crossing abscissae are bit-identical to the point test.
void append_ring_edges(const Ring& ring, std::vector<Edge>& out) {
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) out.push_back({ring[j], ring[i]});
}

std::vector<EdgeSet> residential_edges(const FootprintSet& footprints, const Box& tile_box) {
  std::vector<EdgeSet> sets;
  for (const Footprint& f : footprints.footprints) {
    if (f.class_tag != ClassTag::residential) continue;
    const Box bb = bounding_box(f.polygon);
    if (!boxes_overlap(bb, tile_box)) continue;
    EdgeSet s{bb, {}};
    append_ring_edges(f.polygon.exterior, s.edges);
    for (const Ring& h : f.polygon.holes) append_ring_edges(h, s.edges);
    sets.push_back(std::move(s));
  }
  return sets;
}

// First sample index whose nudged abscissa is >= `bound`.
int first_at_or_after(const Box& box, int n, double bound) {
  const double step = box.width() / n;
  double guess = std::ceil((bound - kSampleEpsilon - box.x_min) / step - 0.5);
  int i = static_cast<int>(std::clamp(guess, 0.0, static_cast<double>(n)));
  while (i > 0 && sample_x(box, n, i - 1) + kSampleEpsilon >= bound) --i;
  while (i < n && sample_x(box, n, i) + kSampleEpsilon < bound) ++i;
  return i;
}

}  // namespace

std::vector<double> CoverageMask::coverage_values() const {
  std::vector<double> out(hits.size());
  const double denom = static_cast<double>(supersample) * supersample;
  for (std::size_t i = 0; i < hits.size(); ++i) out[i] = hits[i] / denom;
  return out;
}

CoverageMask rasterize_coverage(const FootprintSet& footprints, const Box& tile_box, int side_px,
                                int supersample) {
  if (side_px < 1) throw Error(ErrorKind::domain, "side_px must be at least 1");
  if (supersample < 1 || supersample > 255) throw Error(ErrorKind::domain, "supersample must be in [1, 255]");
  if (!(tile_box.width() > 0.0 && tile_box.height() > 0.0)) {
    throw Error(ErrorKind::domain, "tile box must have positive size");
  }

  CoverageMask mask;
  mask.side_px = side_px;
  mask.supersample = supersample;
  mask.hits.assign(static_cast<std::size_t>(side_px) * side_px, 0);

  const std::vector<EdgeSet> sets = residential_edges(footprints, tile_box);
  if (sets.empty()) return mask;

  const int n = side_px * supersample;
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(n));
  std::vector<double> xs;
  for (int row = 0; row < n; ++row) {
    const double yq = sample_y(tile_box, n, row) + kSampleEpsilon;
    std::fill(covered.begin(), covered.end(), 0);
    bool any = false;
    for (const EdgeSet& s : sets) {
      if (!(s.bbox.y_min <= yq && yq < s.bbox.y_max)) continue;
      xs.clear();
      for (const Edge& e : s.edges) {
        if ((e.a.y > yq) != (e.b.y > yq)) {
          xs.push_back(e.a.x + (yq - e.a.y) * (e.b.x - e.a.x) / (e.b.y - e.a.y));
        }
      }
      std::sort(xs.begin(), xs.end());
      // A point is inside iff an odd number of crossings lie strictly to its
      // right, i.e. its nudged abscissa falls in [xs[2k], xs[2k+1]).
      for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
        const int lo = first_at_or_after(tile_box, n, xs[k]);
        const int hi = first_at_or_after(tile_box, n, xs[k + 1]);
        if (lo < hi) {
          std::fill(covered.begin() + lo, covered.begin() + hi, 1);
          any = true;
        }
      }
    }
    if (!any) continue;
    std::uint16_t* out = &mask.hits[static_cast<std::size_t>(row / supersample) * side_px];
    for (int col = 0; col < n; ++col) out[col / supersample] += covered[col];
  }
  return mask;
}

double occupancy_fraction(const CoverageMask& mask) {
  if (mask.hits.empty()) return 0.0;
  std::uint64_t total = 0;
  for (std::uint16_t h : mask.hits) total += h;
  const double denom = static_cast<double>(mask.hits.size()) * mask.supersample * mask.supersample;
  return static_cast<double>(total) / denom;
}

bool residential_footprints_disjoint(const FootprintSet& footprints, const Box& tile_box) {
  std::vector<const Footprint*> near;
  std::vector<Box> boxes;
  for (const Footprint& f : footprints.footprints) {
    if (f.class_tag != ClassTag::residential) continue;
    const Box bb = bounding_box(f.polygon);
    if (!boxes_overlap(bb, tile_box)) continue;
    near.push_back(&f);
    boxes.push_back(bb);
  }
  auto convex = [](const Polygon& p) { return p.holes.empty() && is_convex(p.exterior); };
  for (std::size_t i = 0; i < near.size(); ++i) {
    for (std::size_t j = i + 1; j < near.size(); ++j) {
      if (!boxes_overlap(boxes[i], boxes[j])) continue;
      const Polygon& a = near[i]->polygon;
      const Polygon& b = near[j]->polygon;
      if (!convex(a) && !convex(b)) return false;
      const double shared = convex(b) ? convex_intersection_area(a, b.exterior)
                                      : convex_intersection_area(b, a.exterior);
      if (shared > 1e-9 * std::min(polygon_area(a), polygon_area(b))) return false;
    }
  }
  return true;
}

double exact_occupancy(const FootprintSet& footprints, const Box& tile_box, int fallback_side_px) {
  if (!(tile_box.area() > 0.0)) throw Error(ErrorKind::domain, "tile box must have positive size");
  if (!residential_footprints_disjoint(footprints, tile_box)) {
    return occupancy_fraction(rasterize_coverage(footprints, tile_box, fallback_side_px, 16));
  }
  double covered = 0.0;
  for (const Footprint& f : footprints.footprints) {
    if (f.class_tag != ClassTag::residential) continue;
    for (const Polygon& piece : clip_polygon_to_box(f.polygon, tile_box)) covered += polygon_area(piece);
  }
  return covered / tile_box.area();
}

Image mask_image(const CoverageMask& mask) {
  Image img(mask.side_px, mask.side_px, 1);
  const std::uint32_t denom = static_cast<std::uint32_t>(mask.supersample) * mask.supersample;
  for (std::size_t i = 0; i < mask.hits.size(); ++i) {
    img.samples[i] = static_cast<std::uint8_t>((2u * 255u * mask.hits[i] + denom) / (2u * denom));
  }
  return img;
}

}  // namespace gridpop
