#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace tlsopt {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;
using Point2d = Point2<double>;

/// Implicitly closed vertex loop, no repeated closing vertex. Outer rings are
/// counter-clockwise, holes clockwise.
using Ring = std::vector<Point2d>;

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

using PolygonSet = std::vector<Polygon>;

struct Box2 {
  Point2d min{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point2d max{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  void extend(const Point2d& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  bool empty() const { return !(min.x() <= max.x() && min.y() <= max.y()); }
  Point2d size() const { return empty() ? Point2d::Zero() : Point2d(max - min); }
  Point2d center() const { return 0.5 * (min + max); }
};

template <typename Scalar>
Scalar cross2(const Point2<Scalar>& a, const Point2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Signed shoelace area; positive for counter-clockwise rings.
inline double signed_area(const Ring& ring) {
  const std::size_t n = ring.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += cross2(ring[i], ring[(i + 1) % n]);
  return 0.5 * acc;
}

inline double area(const Polygon& poly) {
  double a = std::abs(signed_area(poly.outer));
  for (const auto& h : poly.holes) a -= std::abs(signed_area(h));
  return a;
}

inline double area(const PolygonSet& set) {
  double a = 0.0;
  for (const auto& p : set) a += area(p);
  return a;
}

inline double perimeter(const Ring& ring) {
  double acc = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) acc += (ring[(i + 1) % ring.size()] - ring[i]).norm();
  return acc;
}

inline Point2d centroid(const Ring& ring) {
  const std::size_t n = ring.size();
  double a = 0.0;
  Point2d c = Point2d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2d& p = ring[i];
    const Point2d& q = ring[(i + 1) % n];
    const double w = cross2(p, q);
    a += w;
    c += w * (p + q);
  }
  if (std::abs(a) < 1e-300) {
    c.setZero();
    for (const auto& p : ring) c += p;
    return c / static_cast<double>(std::max<std::size_t>(n, 1));
  }
  return c / (3.0 * a);
}

inline Point2d centroid(const Polygon& poly) {
  double a = signed_area(poly.outer);
  Point2d c = a * centroid(poly.outer);
  for (const auto& h : poly.holes) {
    const double ah = signed_area(h);
    c += ah * centroid(h);
    a += ah;
  }
  return c / a;
}

inline Box2 bounding_box(const Ring& ring) {
  Box2 b;
  for (const auto& p : ring) b.extend(p);
  return b;
}

inline Box2 bounding_box(const PolygonSet& set) {
  Box2 b;
  for (const auto& poly : set)
    for (const auto& p : poly.outer) b.extend(p);
  return b;
}

/// Even-odd crossing test; points on the boundary may go either way.
inline bool contains(const Ring& ring, const Point2d& p) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2d& a = ring[i];
    const Point2d& b = ring[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

inline bool contains(const Polygon& poly, const Point2d& p) {
  if (!contains(poly.outer, p)) return false;
  for (const auto& h : poly.holes)
    if (contains(h, p)) return false;
  return true;
}

inline bool contains(const PolygonSet& set, const Point2d& p) {
  return std::any_of(set.begin(), set.end(), [&](const Polygon& poly) { return contains(poly, p); });
}

inline double distance_to_segment(const Point2d& p, const Point2d& a, const Point2d& b) {
  const Point2d ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - p).norm();
}

inline double distance_to_boundary(const Ring& ring, const Point2d& p) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ring.size(); ++i)
    d = std::min(d, distance_to_segment(p, ring[i], ring[(i + 1) % ring.size()]));
  return d;
}

inline double distance_to_boundary(const Polygon& poly, const Point2d& p) {
  double d = distance_to_boundary(poly.outer, p);
  for (const auto& h : poly.holes) d = std::min(d, distance_to_boundary(h, p));
  return d;
}

inline double distance_to_boundary(const PolygonSet& set, const Point2d& p) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& poly : set) d = std::min(d, distance_to_boundary(poly, p));
  return d;
}

/// Applies `f` to every vertex of every ring.
template <typename F>
Polygon transformed(const Polygon& poly, F&& f) {
  Polygon out;
  out.outer.reserve(poly.outer.size());
  for (const auto& p : poly.outer) out.outer.push_back(f(p));
  for (const auto& h : poly.holes) {
    Ring r;
    r.reserve(h.size());
    for (const auto& p : h) r.push_back(f(p));
    out.holes.push_back(std::move(r));
  }
  return out;
}

/// Fixes ring orientation after a transform that may have flipped it.
inline void orient(Polygon& poly) {
  if (signed_area(poly.outer) < 0) std::reverse(poly.outer.begin(), poly.outer.end());
  for (auto& h : poly.holes)
    if (signed_area(h) > 0) std::reverse(h.begin(), h.end());
}

inline Polygon rectangle(double x0, double y0, double x1, double y1) {
  return Polygon{{Point2d(x0, y0), Point2d(x1, y0), Point2d(x1, y1), Point2d(x0, y1)}, {}};
}

}  // namespace tlsopt
