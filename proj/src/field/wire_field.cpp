#include "tlsopt/field/wire_field.hpp"

#include "tlsopt/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tlsopt {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Area of a ring clipped to the horizontal slab lo <= y <= hi.
double slab_area(const Ring& ring, double lo, double hi) {
  const auto clip = [](const Ring& in, double c, double sign) {
    Ring out;
    for (std::size_t k = 0; k < in.size(); ++k) {
      const Point2d& a = in[k];
      const Point2d& b = in[(k + 1) % in.size()];
      const double sa = sign * (a.y() - c);
      const double sb = sign * (b.y() - c);
      if (sa >= 0) out.push_back(a);
      if ((sa >= 0) != (sb >= 0)) out.push_back(a + (sa / (sa - sb)) * (b - a));
    }
    return out;
  };
  const Ring r = clip(clip(ring, lo, 1.0), hi, -1.0);
  return r.size() < 3 ? 0.0 : std::abs(signed_area(r));
}

}  // namespace

CenterlineField centerline_field(const WireProfile& wire, const HalfSpaceDielectric& dielectric,
                                 const WireFieldConfig& config) {
  if (config.samples < 50) throw ConfigError("centerline field needs at least 50 samples");
  const Layout layout = wire_model_layout(wire, config.model);
  const ElectrostaticModel model(mesh_conductors(layout, config.mesh), dielectric);
  const double v = config.differential_voltage;
  const ChargeSolution s = model.solve(Eigen::Vector2d(0.5 * v, -0.5 * v));

  const int n = config.samples;
  const double y0 = wire_origin_y(config.model);
  const double len = wire.wire_length();
  const double yc = config.junction_cutoff;
  if (!(yc >= 0.0 && yc < 0.5 * len)) throw ConfigError("junction cutoff must lie in [0, L/2)");
  const double beta = config.clustering;
  std::vector<double> edges(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double u = static_cast<double>(k) / n;
    const double s = beta > 0.0 ? std::expm1(beta * u) / std::expm1(beta) : u;
    edges[k] = yc + (len - yc) * s;
  }
  CenterlineField out;
  out.y.resize(n);
  out.dy.resize(n);
  out.field.resize(n);
  out.half_width.resize(n);
  out.line_charge = Eigen::VectorXd::Zero(n);
  out.voltage = v;
  out.model_energy = s.total_energy;

  const PanelMesh& mesh = model.mesh();
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    const Panel& p = mesh.panels[j];
    if (p.conductor != 0) continue;
    const Box2 b = bounding_box(p.shape.outer);
    const auto first = std::upper_bound(edges.begin(), edges.end(), b.min.y() - y0);
    const int k0 = std::max(0, static_cast<int>(first - edges.begin()) - 1);
    for (int k = k0; k < n && y0 + edges[k] < b.max.y(); ++k) {
      const double a = slab_area(p.shape.outer, y0 + edges[k], y0 + edges[k + 1]);
      out.line_charge(k) += s.charge(j) * a / p.area();
    }
  }
  for (int k = 0; k < n; ++k) {
    out.dy(k) = edges[k + 1] - edges[k];
    out.line_charge(k) /= out.dy(k) * 1e-6;
    out.y(k) = 0.5 * (edges[k] + edges[k + 1]);
    out.half_width(k) = wire.half_width(out.y(k));
    if (!(out.half_width(k) > 0.0)) throw InfeasibleGeometry("wire half-width vanishes on the centreline");
    const double sigma = out.line_charge(k) / (kPi * out.half_width(k) * 1e-6);
    out.field(k) = std::abs(sigma) / (kEpsilon0 * (1.0 + dielectric.eps_substrate));
  }
  return out;
}

}  // namespace tlsopt
