#include "tlsopt/geometry/wire.hpp"

#include "tlsopt/error.hpp"
#include "tlsopt/geometry/polygon_ops.hpp"

#include <sstream>

namespace tlsopt {
namespace {

BSplineCurve<double> make_curve(const WireDesignVector& v, double length, double r0, int degree) {
  const auto ys = BSplineCurve<double>::greville_abscissae(5, degree);
  std::vector<Point2d> cps;
  cps.emplace_back(r0, 0.0);
  for (int i = 0; i < 4; ++i) cps.emplace_back(v(i), length * ys[i + 1]);
  return BSplineCurve<double>::clamped_uniform(std::move(cps), degree);
}

}  // namespace

WireProfile::WireProfile(const WireDesignVector& design, double wire_length, double junction_half_width, int degree)
    : design_(design),
      wire_length_(wire_length),
      junction_half_width_(junction_half_width),
      curve_(make_curve(design, wire_length, junction_half_width, degree)) {
  if (!(wire_length > 0.0)) throw InfeasibleGeometry("wire length must be positive");
  if (!(junction_half_width > 0.0)) throw InfeasibleGeometry("junction width must be positive");
  if (!design.allFinite()) throw InfeasibleGeometry("wire design vector has non-finite entries");
  constexpr int kChecks = 400;
  for (int i = 0; i <= kChecks; ++i) {
    const double r = curve_.evaluate(static_cast<double>(i) / kChecks).x();
    if (!(r > 0.0)) {
      std::ostringstream os;
      os << "wire half-width crosses zero near y = " << wire_length * i / kChecks << " um";
      throw InfeasibleGeometry(os.str());
    }
  }
}

double WireProfile::half_width(double y) const { return curve_.evaluate(y / wire_length_).x(); }

std::vector<double> WireProfile::control_y() const {
  auto ys = BSplineCurve<double>::greville_abscissae(5, curve_.degree());
  for (auto& y : ys) y *= wire_length_;
  return ys;
}

WireProfile build_wire_profile(const WireDesignVector& v, double wire_length, double junction_width, int degree) {
  return WireProfile(v, wire_length, 0.5 * junction_width, degree);
}

Layout wire_model_layout(const WireProfile& profile, const WireModelConfig& config) {
  const double y_origin = wire_origin_y(config);
  const double top = y_origin + profile.wire_length();
  const auto half = profile.curve().polygonize(config.chord_tolerance);

  // Wire body: right edge walked up, mirrored left edge walked down. The top
  // edge is buried in the stub, which overlaps it slightly to force a clean
  // union.
  Ring body;
  for (const auto& p : half) body.emplace_back(p.x(), y_origin + p.y());
  for (auto it = half.rbegin(); it != half.rend(); ++it) body.emplace_back(-it->x(), y_origin + it->y());
  Polygon wire{simplify_ring(body, 1e-12), {}};
  orient(wire);
  std::string why;
  if (!is_simple_polygon(wire, &why)) throw InfeasibleGeometry("wire outline is not simple: " + why);

  const double sw = std::max(config.stub_width, 2.0 * half.back().x());
  Polygon stub = rectangle(-0.5 * sw, top - 1e-9, 0.5 * sw, top + config.stub_height);
  PolygonSet upper = polygon_union({wire}, {stub});
  if (upper.size() != 1) throw InfeasibleGeometry("wire and pad stub do not form one conductor");

  PolygonSet lower;
  for (const auto& p : upper) {
    Polygon m = transformed(p, [](const Point2d& q) { return Point2d(q.x(), -q.y()); });
    orient(m);
    lower.push_back(std::move(m));
  }

  Layout layout;
  layout.kind = "wire";
  layout.conductors.push_back({"wire_plus", ConductorRole::PadPlus, std::move(upper), true});
  layout.conductors.push_back({"wire_minus", ConductorRole::PadMinus, std::move(lower), true});
  return layout;
}

}  // namespace tlsopt
