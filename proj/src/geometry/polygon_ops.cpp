#include "tlsopt/geometry/polygon_ops.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/box.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include <cmath>

namespace tlsopt {
namespace {

namespace bg = boost::geometry;
using BPoint = bg::model::d2::point_xy<double>;
using BPolygon = bg::model::polygon<BPoint, /*clockwise=*/false, /*closed=*/true>;
using BMulti = bg::model::multi_polygon<BPolygon>;
using BBox = bg::model::box<BPoint>;

// Offsets are in micrometres; arcs at round joins use this many points per
// full circle.
constexpr int kPointsPerCircle = 72;

void append_ring(const Ring& ring, BPolygon::ring_type& out) {
  out.clear();
  out.reserve(ring.size() + 1);
  for (const auto& p : ring) out.emplace_back(p.x(), p.y());
  if (!ring.empty()) out.emplace_back(ring.front().x(), ring.front().y());
}

BPolygon to_boost(const Polygon& poly) {
  BPolygon out;
  append_ring(poly.outer, out.outer());
  for (const auto& h : poly.holes) {
    out.inners().emplace_back();
    append_ring(h, out.inners().back());
  }
  bg::correct(out);
  return out;
}

BMulti to_boost(const PolygonSet& set) {
  BMulti out;
  for (const auto& p : set)
    if (p.outer.size() >= 3) out.push_back(to_boost(p));
  return out;
}

Ring from_boost(const BPolygon::ring_type& ring) {
  Ring out;
  if (ring.size() < 2) return out;
  out.reserve(ring.size() - 1);
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) out.emplace_back(ring[i].x(), ring[i].y());
  return out;
}

PolygonSet from_boost(const BMulti& multi) {
  PolygonSet out;
  out.reserve(multi.size());
  for (const auto& p : multi) {
    Polygon poly;
    poly.outer = from_boost(p.outer());
    if (poly.outer.size() < 3) continue;
    for (const auto& h : p.inners()) {
      Ring r = from_boost(h);
      if (r.size() >= 3) poly.holes.push_back(std::move(r));
    }
    orient(poly);
    out.push_back(std::move(poly));
  }
  return out;
}

// Boolean results may contain hairline fragments from near-coincident edges.
PolygonSet drop_fragments(PolygonSet set, double min_area = 1e-10) {
  std::erase_if(set, [&](const Polygon& p) { return area(p) <= min_area; });
  return set;
}

bool is_convex(const Polygon& poly) {
  if (!poly.holes.empty() || poly.outer.size() < 3) return false;
  const Ring& r = poly.outer;
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i)
    if (cross2<double>(r[(i + 1) % n] - r[i], r[(i + 2) % n] - r[(i + 1) % n]) < 0.0) return false;
  return true;
}

// Convex erosion as an intersection of shifted half-planes. Boost's overlay
// snaps to an internal integer grid; this path keeps full double precision.
PolygonSet erode_convex(const Polygon& poly, double depth) {
  const Ring& r = poly.outer;
  const std::size_t n = r.size();
  Ring clip = r;
  for (std::size_t i = 0; i < n && clip.size() >= 3; ++i) {
    const Point2d e = r[(i + 1) % n] - r[i];
    const Point2d inward = Point2d(-e.y(), e.x()).normalized();
    const double c = inward.dot(r[i]) + depth;  // keep points with inward.x >= c
    Ring next;
    for (std::size_t k = 0; k < clip.size(); ++k) {
      const Point2d& a = clip[k];
      const Point2d& b = clip[(k + 1) % clip.size()];
      const double sa = inward.dot(a) - c;
      const double sb = inward.dot(b) - c;
      if (sa >= 0) next.push_back(a);
      if ((sa >= 0) != (sb >= 0)) next.push_back(a + (sa / (sa - sb)) * (b - a));
    }
    clip = std::move(next);
  }
  if (clip.size() < 3 || std::abs(signed_area(clip)) <= 1e-12) return {};
  return {Polygon{simplify_ring(clip, 1e-12), {}}};
}

}  // namespace

PolygonSet offset_polygon(const PolygonSet& polygons, double distance) {
  if (distance == 0.0) return polygons;
  if (distance < 0.0 && polygons.size() == 1 && is_convex(polygons.front()))
    return erode_convex(polygons.front(), -distance);
  const BMulti in = to_boost(polygons);
  BMulti out;
  bg::strategy::buffer::distance_symmetric<double> dist(distance);
  bg::strategy::buffer::side_straight side;
  bg::strategy::buffer::join_round join(kPointsPerCircle);
  bg::strategy::buffer::end_flat end;
  bg::strategy::buffer::point_circle point(kPointsPerCircle);
  bg::buffer(in, out, dist, side, join, end, point);
  return drop_fragments(from_boost(out));
}

PolygonSet offset_polygon(const Polygon& polygon, double distance) {
  return offset_polygon(PolygonSet{polygon}, distance);
}

PolygonSet polygon_union(const PolygonSet& a, const PolygonSet& b) {
  BMulti out;
  bg::union_(to_boost(a), to_boost(b), out);
  return drop_fragments(from_boost(out));
}

PolygonSet polygon_difference(const PolygonSet& a, const PolygonSet& b) {
  if (b.empty()) return a;
  BMulti out;
  bg::difference(to_boost(a), to_boost(b), out);
  return drop_fragments(from_boost(out));
}

PolygonSet polygon_intersection(const PolygonSet& a, const PolygonSet& b) {
  BMulti out;
  bg::intersection(to_boost(a), to_boost(b), out);
  return drop_fragments(from_boost(out));
}

PolygonSet polygon_intersection(const PolygonSet& a, const Box2& box) {
  PolygonSet clip{rectangle(box.min.x(), box.min.y(), box.max.x(), box.max.y())};
  return polygon_intersection(a, clip);
}

PolygonSet normalized(const PolygonSet& set) {
  BMulti out;
  bg::union_(to_boost(set), BMulti{}, out);
  return drop_fragments(from_boost(out));
}

bool is_simple_polygon(const Polygon& polygon, std::string* reason) {
  if (polygon.outer.size() < 3) {
    if (reason) *reason = "fewer than three vertices";
    return false;
  }
  for (const auto& p : polygon.outer)
    if (!p.allFinite()) {
      if (reason) *reason = "non-finite vertex";
      return false;
    }
  const BPolygon bp = to_boost(polygon);
  std::string message;
  if (!bg::is_valid(bp, message)) {
    if (reason) *reason = message;
    return false;
  }
  return true;
}

Ring simplify_ring(const Ring& ring, double tolerance) {
  Ring out;
  out.reserve(ring.size());
  for (const auto& p : ring)
    if (out.empty() || (p - out.back()).norm() > tolerance) out.push_back(p);
  while (out.size() > 1 && (out.front() - out.back()).norm() <= tolerance) out.pop_back();
  // collinear pass
  bool changed = true;
  while (changed && out.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < out.size() && out.size() > 3; ++i) {
      const Point2d& a = out[(i + out.size() - 1) % out.size()];
      const Point2d& b = out[i];
      const Point2d& c = out[(i + 1) % out.size()];
      const double len = (c - a).norm();
      if (len > 0 && std::abs(cross2<double>(c - a, b - a)) / len < 1e-9 * std::max(1.0, len) &&
          (b - a).dot(c - b) >= 0) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
      }
    }
  }
  return out;
}

Polygon simplify_polygon(const Polygon& polygon, double tolerance) {
  const BPolygon in = to_boost(polygon);
  BPolygon out;
  bg::simplify(in, out, tolerance);
  if (out.outer().size() < 4 || !bg::is_valid(out)) return polygon;
  PolygonSet set = from_boost(BMulti{out});
  return set.empty() ? polygon : set.front();
}

double polygon_distance(const PolygonSet& a, const PolygonSet& b) {
  return bg::distance(to_boost(a), to_boost(b));
}

}  // namespace tlsopt
