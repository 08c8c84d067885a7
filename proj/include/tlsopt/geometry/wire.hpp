#pragma once

#include "tlsopt/geometry/bspline.hpp"
#include "tlsopt/geometry/layout.hpp"

#include <Eigen/Core>

namespace tlsopt {

/// Free x-coordinates (half-widths, µm) of the wire control points P1..P4.
/// P0 is pinned at the junction half-width; the control y-coordinates are
/// fixed at the Greville abscissae so y along the curve is linear in t.
using WireDesignVector = Eigen::Vector4d;

class WireProfile {
 public:
  WireProfile(const WireDesignVector& design, double wire_length, double junction_half_width, int degree = 3);

  /// Half-width r(y) for y in [0, wire_length], measured from the junction.
  double half_width(double y) const;

  const WireDesignVector& design() const { return design_; }
  double wire_length() const { return wire_length_; }
  double junction_half_width() const { return junction_half_width_; }
  const BSplineCurve<double>& curve() const { return curve_; }

  /// Fixed y-coordinates of the five control points.
  std::vector<double> control_y() const;

 private:
  WireDesignVector design_;
  double wire_length_;
  double junction_half_width_;
  BSplineCurve<double> curve_;
};

WireProfile build_wire_profile(const WireDesignVector& v, double wire_length, double junction_width, int degree = 3);

struct WireModelConfig {
  double junction_gap = 1.0;  // separation of the two electrodes at the junction
  double stub_width = 100.0;
  double stub_height = 20.0;  // pad stub extent beyond the wire end
  double chord_tolerance = 0.05;
};

/// Local two-conductor model: upper wire + pad stub at +V/2 and its mirror
/// image through y = 0 at -V/2. No ground frame and no SA window.
Layout wire_model_layout(const WireProfile& profile, const WireModelConfig& config = {});

/// Absolute y of the profile origin (junction end of the upper wire).
inline double wire_origin_y(const WireModelConfig& config) { return 0.5 * config.junction_gap; }

}  // namespace tlsopt
