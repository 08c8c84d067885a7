#include "tlsopt/geometry/pad.hpp"

#include "tlsopt/error.hpp"
#include "tlsopt/geometry/bspline.hpp"
#include "tlsopt/geometry/polygon_ops.hpp"

#include <cmath>
#include <sstream>

namespace tlsopt {
namespace {

Polygon mirror_y(const Polygon& p) {
  Polygon m = transformed(p, [](const Point2d& q) { return Point2d(q.x(), -q.y()); });
  orient(m);
  return m;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

Box2 PadLayout::pads_bounding_box() const {
  Box2 b;
  for (const auto& c : model.conductors)
    if (c.role != ConductorRole::Ground)
      for (const auto& p : c.shape)
        for (const auto& q : p.outer) b.extend(q);
  return b;
}

PadLayout build_pad_outline(const PadDesignVector& v, const PadConfig& config) {
  if (!v.allFinite()) throw InfeasibleGeometry("pad design vector has non-finite entries");
  const double y0 = v(6);
  const double y4 = v(7);
  if (!(y4 > y0)) throw InfeasibleGeometry("P4 must lie above P0 (y4 = " + fmt(y4) + ", y0 = " + fmt(y0) + ")");
  for (int i = 0; i < 3; ++i)
    if (!(v(2 * i) > 0.0)) throw InfeasibleGeometry("control point P" + std::to_string(i + 1) + " must have x > 0");

  std::vector<Point2d> cps{Point2d(0.0, y0), Point2d(v(0), v(1)), Point2d(v(2), v(3)), Point2d(v(4), v(5)),
                           Point2d(0.0, y4)};
  const auto curve = BSplineCurve<double>::clamped_uniform(cps, config.degree);
  const auto half = curve.polygonize(config.chord_tolerance);

  // Right half runs P0 -> P4; the left half is its mirror walked back down.
  Ring outer;
  outer.reserve(2 * half.size());
  for (const auto& p : half) outer.push_back(p);
  for (std::size_t i = half.size() - 1; i-- > 1;) outer.emplace_back(-half[i].x(), half[i].y());
  for (std::size_t i = 1; i + 1 < half.size(); ++i)
    if (half[i].x() <= 1e-9) throw InfeasibleGeometry("pad outline touches its own symmetry axis");
  outer = simplify_ring(outer, 1e-9);

  Polygon upper{outer, {}};
  orient(upper);
  std::string why;
  if (!is_simple_polygon(upper, &why)) throw InfeasibleGeometry("pad outline is not simple: " + why);

  PadLayout layout = assemble_pad_layout("spline_pad", {upper}, {mirror_y(upper)}, config, y0);
  layout.design = v;
  layout.mirror_axis_x = 0.0;
  validate_pad_layout(layout);
  return layout;
}

PadLayout assemble_pad_layout(std::string kind, PolygonSet pad_plus, PolygonSet pad_minus, const PadConfig& config,
                              double wire_length) {
  PadLayout layout;
  layout.kind = std::move(kind);
  layout.ground_gap = config.ground_gap;
  layout.footprint_limit = config.footprint_limit;
  layout.outline = pad_plus.front();
  layout.wire_length = wire_length;

  Box2 pads;
  for (const auto* set : {&pad_plus, &pad_minus})
    for (const auto& p : *set)
      for (const auto& q : p.outer) pads.extend(q);

  const Point2d size = pads.size();
  const double tol = 1e-6;
  if (size.x() > config.footprint_limit.x() + tol || size.y() > config.footprint_limit.y() + tol)
    throw InfeasibleGeometry("pad footprint " + fmt(size.x()) + " x " + fmt(size.y()) + " um exceeds limit " +
                             fmt(config.footprint_limit.x()) + " x " + fmt(config.footprint_limit.y()) + " um");

  const double g = config.ground_gap;
  const Point2d c = pads.center();
  const Point2d half_outer = 0.5 * config.footprint_limit + Point2d::Constant(g + config.frame_width);
  Polygon frame = rectangle(c.x() - half_outer.x(), c.y() - half_outer.y(), c.x() + half_outer.x(),
                            c.y() + half_outer.y());
  Ring hole{Point2d(pads.min.x() - g, pads.min.y() - g), Point2d(pads.min.x() - g, pads.max.y() + g),
            Point2d(pads.max.x() + g, pads.max.y() + g), Point2d(pads.max.x() + g, pads.min.y() - g)};
  frame.holes.push_back(hole);

  layout.model.kind = layout.kind;
  layout.model.conductors.push_back({"pad_plus", ConductorRole::PadPlus, std::move(pad_plus), true});
  layout.model.conductors.push_back({"pad_minus", ConductorRole::PadMinus, std::move(pad_minus), true});
  layout.model.conductors.push_back({"ground", ConductorRole::Ground, {frame}, false});
  layout.model.gap_domain.extend(Point2d(pads.min.x() - g, pads.min.y() - g));
  layout.model.gap_domain.extend(Point2d(pads.max.x() + g, pads.max.y() + g));

  const double sep = polygon_distance(layout.model.conductors[0].shape, layout.model.conductors[1].shape);
  if (sep < config.min_pad_separation)
    throw InfeasibleGeometry("pads are " + fmt(sep) + " um apart, below the minimum separation " +
                             fmt(config.min_pad_separation) + " um");
  return layout;
}

void validate_pad_layout(const PadLayout& layout, double tolerance) {
  std::string why;
  for (const auto& c : layout.model.conductors)
    for (const auto& p : c.shape)
      if (!is_simple_polygon(p, &why)) throw InfeasibleGeometry(c.name + " polygon is not simple: " + why);

  const Point2d size = layout.pads_bounding_box().size();
  if (size.x() > layout.footprint_limit.x() + tolerance || size.y() > layout.footprint_limit.y() + tolerance)
    throw InfeasibleGeometry("footprint exceeded");

  const int g = layout.model.index_of(ConductorRole::Ground);
  if (g >= 0) {
    PolygonSet pads;
    for (const auto& c : layout.model.conductors)
      if (c.role != ConductorRole::Ground) pads.insert(pads.end(), c.shape.begin(), c.shape.end());
    const double d = polygon_distance(pads, layout.model.conductors[g].shape);
    if (std::abs(d - layout.ground_gap) > 1e-6 * std::max(1.0, layout.ground_gap))
      throw InfeasibleGeometry("pad-to-ground gap " + fmt(d) + " um differs from " + fmt(layout.ground_gap));
  }

  if (layout.mirror_axis_x) {
    const double ax = *layout.mirror_axis_x;
    const double tol = 1e-6 * std::max(1.0, layout.pads_bounding_box().size().maxCoeff());
    for (const auto& q : layout.outline.outer) {
      const Point2d r(2.0 * ax - q.x(), q.y());
      if (distance_to_boundary(layout.outline, r) > tol) throw InfeasibleGeometry("outline is not mirror-symmetric");
    }
  }
}

}  // namespace tlsopt
