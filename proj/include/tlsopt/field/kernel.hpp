#pragma once

#include "tlsopt/geometry/types.hpp"

#include <cmath>

namespace tlsopt::kernel {

/// ln((s_b + R_b) / (s_a + R_a)): the integral of 1/|p - r| along a straight
/// segment, with s the tangential coordinates of its ends relative to the
/// foot of the perpendicular from p, R the end distances and h2 the squared
/// perpendicular distance. Written to avoid cancellation when s < 0.
inline double segment_log(double sa, double sb, double ra, double rb, double h2) {
  if (sa >= 0.0) return std::log((sb + rb) / (sa + ra));
  if (sb <= 0.0) return std::log((ra - sa) / (rb - sb));
  return std::log((sb + rb) * (ra - sa) / h2);
}

/// Integral of 1/|p - r| over a ring's interior (signed by orientation) for
/// an observation point p in the plane of the ring. Exact; finite everywhere
/// including on the boundary.
inline double ring_potential(const Ring& ring, const Point2d& p) {
  double acc = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2d& a = ring[i];
    const Point2d& b = ring[(i + 1) % n];
    const Point2d e = b - a;
    const double len = e.norm();
    if (len == 0.0) continue;
    const Point2d t = e / len;
    const Point2d da = a - p;
    const Point2d db = b - p;
    // outward normal of a counter-clockwise ring is (t.y, -t.x)
    const double h = da.x() * t.y() - da.y() * t.x();
    if (std::abs(h) < 1e-14 * len) continue;
    const double sa = da.dot(t);
    const double sb = db.dot(t);
    acc += h * segment_log(sa, sb, da.norm(), db.norm(), h * h);
  }
  return acc;
}

/// Sum over boundary edges of outward normal times the segment log. This is
/// the in-plane gradient integral: for unit charge density on the ring the
/// in-plane field at p is proportional to this vector. Singular on the
/// boundary itself; `min_h2` guards points lying on an edge.
inline Point2d ring_field(const Ring& ring, const Point2d& p, bool* on_edge = nullptr) {
  Point2d acc = Point2d::Zero();
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2d& a = ring[i];
    const Point2d& b = ring[(i + 1) % n];
    const Point2d e = b - a;
    const double len = e.norm();
    if (len == 0.0) continue;
    const Point2d t = e / len;
    const Point2d da = a - p;
    const Point2d db = b - p;
    const double h = da.x() * t.y() - da.y() * t.x();
    const double sa = da.dot(t);
    const double sb = db.dot(t);
    const double h2 = h * h;
    if (h2 <= 1e-24 * len * len && sa < 0.0 && sb > 0.0) {
      if (on_edge) *on_edge = true;
      continue;
    }
    acc += Point2d(t.y(), -t.x()) * segment_log(sa, sb, da.norm(), db.norm(), std::max(h2, 1e-300));
  }
  return acc;
}

/// Area and second central moments of a simple ring (counter-clockwise).
struct Moments {
  double area = 0.0;
  Point2d centroid = Point2d::Zero();
  double ixx = 0.0;  // integral of (x - cx)^2 dA
  double iyy = 0.0;
  double ixy = 0.0;
};

inline Moments moments(const Ring& ring) {
  Moments m;
  const std::size_t n = ring.size();
  // shift to the first vertex to keep the sums well conditioned
  const Point2d o = ring.front();
  double a = 0, cx = 0, cy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2d p = ring[i] - o;
    const Point2d q = ring[(i + 1) % n] - o;
    const double w = p.x() * q.y() - q.x() * p.y();
    a += w;
    cx += (p.x() + q.x()) * w;
    cy += (p.y() + q.y()) * w;
    sxx += (p.x() * p.x() + p.x() * q.x() + q.x() * q.x()) * w;
    syy += (p.y() * p.y() + p.y() * q.y() + q.y() * q.y()) * w;
    sxy += (p.x() * q.y() + 2 * p.x() * p.y() + 2 * q.x() * q.y() + q.x() * p.y()) * w;
  }
  a *= 0.5;
  m.area = a;
  const Point2d c(cx / (6 * a), cy / (6 * a));
  m.centroid = c + o;
  m.ixx = sxx / 12.0 - a * c.x() * c.x();
  m.iyy = syy / 12.0 - a * c.y() * c.y();
  m.ixy = sxy / 24.0 - a * c.x() * c.y();
  return m;
}

/// Far-field potential integral of a uniformly charged panel: monopole plus
/// quadrupole terms about the centroid.
inline double far_potential(const Moments& m, const Point2d& p) {
  const Point2d r = p - m.centroid;
  const double r2 = r.squaredNorm();
  const double inv = 1.0 / std::sqrt(r2);
  const double inv5 = inv * inv * inv * inv * inv;
  const double quad = 3.0 * (m.ixx * r.x() * r.x() + 2.0 * m.ixy * r.x() * r.y() + m.iyy * r.y() * r.y()) -
                      r2 * (m.ixx + m.iyy);
  return m.area * inv + 0.5 * quad * inv5;
}

/// Far-field in-plane gradient integral (monopole): area * r / |r|^3.
inline Point2d far_field(const Moments& m, const Point2d& p) {
  const Point2d r = p - m.centroid;
  const double r2 = r.squaredNorm();
  return m.area * r / (r2 * std::sqrt(r2));
}

}  // namespace tlsopt::kernel
