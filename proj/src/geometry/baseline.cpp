#include "tlsopt/geometry/baseline.hpp"

#include "tlsopt/error.hpp"

#include <cmath>
#include <numbers>

namespace tlsopt {
namespace {

double param(const BaselineParams& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

Ring circle(double radius, double chord_tolerance, bool clockwise) {
  // sagitta r(1 - cos(pi/n)) <= tol
  const double max_angle = 2.0 * std::acos(std::max(-1.0, 1.0 - chord_tolerance / radius));
  int n = std::max(16, static_cast<int>(std::ceil(2.0 * std::numbers::pi / max_angle)));
  n += n % 2;  // even count keeps the polygon symmetric about x = 0
  Ring r;
  r.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n * (clockwise ? -1.0 : 1.0);
    r.emplace_back(radius * std::cos(a), radius * std::sin(a));
  }
  return r;
}

}  // namespace

BaselineKind baseline_kind_from_string(const std::string& name) {
  if (name == "double_pad") return BaselineKind::DoublePad;
  if (name == "concentric") return BaselineKind::Concentric;
  if (name == "straight_wire") return BaselineKind::StraightWire;
  if (name == "linear_taper") return BaselineKind::LinearTaper;
  throw UsageError("unknown baseline '" + name + "' (known: double_pad, concentric, straight_wire, linear_taper)");
}

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::DoublePad: return "double_pad";
    case BaselineKind::Concentric: return "concentric";
    case BaselineKind::StraightWire: return "straight_wire";
    case BaselineKind::LinearTaper: return "linear_taper";
  }
  return "?";
}

std::vector<std::string> baseline_names() { return {"double_pad", "concentric", "straight_wire", "linear_taper"}; }

PadLayout double_pad(double width, double height, double gap, const PadConfig& config) {
  if (!(width > 0 && height > 0 && gap > 0 && gap < height))
    throw UsageError("double_pad needs width > 0, height > gap > 0");
  PadConfig c = config;
  c.footprint_limit = Point2d(width, height);
  const double h = 0.5 * (height - gap);
  Polygon upper = rectangle(-0.5 * width, 0.5 * gap, 0.5 * width, 0.5 * gap + h);
  Polygon lower = rectangle(-0.5 * width, -0.5 * gap - h, 0.5 * width, -0.5 * gap);
  PadLayout layout = assemble_pad_layout("double_pad", {upper}, {lower}, c, 0.5 * gap);
  layout.mirror_axis_x = 0.0;
  validate_pad_layout(layout);
  return layout;
}

PadLayout concentric(double outer_diameter, double inner_radius, double ring_gap, const PadConfig& config) {
  const double ro = 0.5 * outer_diameter;
  const double ri = inner_radius + ring_gap;
  if (!(inner_radius > 0 && ring_gap > 0 && ri < ro)) throw UsageError("concentric needs inner_radius + ring_gap < D/2");
  PadConfig c = config;
  c.footprint_limit = Point2d(outer_diameter, outer_diameter);
  Polygon disk{circle(inner_radius, config.chord_tolerance, false), {}};
  Polygon ring{circle(ro, config.chord_tolerance, false), {circle(ri, config.chord_tolerance, true)}};
  PadLayout layout = assemble_pad_layout("concentric", {disk}, {ring}, c, 0.5 * ring_gap);
  layout.mirror_axis_x = 0.0;
  validate_pad_layout(layout);
  return layout;
}

WireProfile straight_wire(double width, double length) {
  return build_wire_profile(WireDesignVector::Constant(0.5 * width), length, width);
}

WireProfile linear_taper(double slope, double junction_width, double length) {
  const double r0 = 0.5 * junction_width;
  const auto ys = BSplineCurve<double>::greville_abscissae(5, 3);
  WireDesignVector v;
  for (int i = 0; i < 4; ++i) v(i) = r0 + slope * length * ys[i + 1];
  return build_wire_profile(v, length, junction_width);
}

BaselineGeometry make_baseline(BaselineKind kind, const BaselineParams& p, const PadConfig& pad_config) {
  switch (kind) {
    case BaselineKind::DoublePad:
      return double_pad(param(p, "width", 800.0), param(p, "height", 600.0), param(p, "gap", 80.0), pad_config);
    case BaselineKind::Concentric:
      return concentric(param(p, "outer_diameter", 800.0), param(p, "inner_radius", 200.0),
                        param(p, "ring_gap", 80.0), pad_config);
    case BaselineKind::StraightWire:
      return straight_wire(param(p, "width", 1.0), param(p, "length", 81.0));
    case BaselineKind::LinearTaper:
      return linear_taper(param(p, "slope", 0.4), param(p, "junction_width", 1.0), param(p, "length", 81.0));
  }
  throw UsageError("unknown baseline kind");
}

BaselineGeometry make_baseline(const std::string& kind, const BaselineParams& params, const PadConfig& pad_config) {
  return make_baseline(baseline_kind_from_string(kind), params, pad_config);
}

}  // namespace tlsopt
