#pragma once

#include "tlsopt/geometry/types.hpp"

#include <string>

namespace tlsopt {

/// Minkowski offset of a polygon: negative distances erode (inward), positive
/// dilate. Eroding past the inradius yields an empty set, not an error.
PolygonSet offset_polygon(const Polygon& polygon, double distance);
PolygonSet offset_polygon(const PolygonSet& polygons, double distance);

PolygonSet polygon_union(const PolygonSet& a, const PolygonSet& b);
PolygonSet polygon_difference(const PolygonSet& a, const PolygonSet& b);
PolygonSet polygon_intersection(const PolygonSet& a, const PolygonSet& b);
PolygonSet polygon_intersection(const PolygonSet& a, const Box2& box);

/// Normalizes orientation and merges overlapping parts.
PolygonSet normalized(const PolygonSet& set);

/// True when the polygon has no self-intersections or spikes. On failure
/// `reason` names the violated property.
bool is_simple_polygon(const Polygon& polygon, std::string* reason = nullptr);

/// Removes consecutive vertices closer than `tolerance` and collinear points.
Ring simplify_ring(const Ring& ring, double tolerance);

/// Douglas-Peucker simplification of every ring; the result stays valid or
/// the input is returned unchanged.
Polygon simplify_polygon(const Polygon& polygon, double tolerance);

/// Minimum distance between two polygon sets (0 when they overlap).
double polygon_distance(const PolygonSet& a, const PolygonSet& b);

}  // namespace tlsopt
