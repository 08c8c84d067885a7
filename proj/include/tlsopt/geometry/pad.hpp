#pragma once

#include "tlsopt/geometry/layout.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>

namespace tlsopt {

/// Spline pad design vector in micrometres: (x1, y1, x2, y2, x3, y3, y0, y4).
/// P0 = (0, y0) and P4 = (0, y4) sit on the pad's symmetry axis; P1..P3 are
/// the free right-hand control points, mirrored to the left.
using PadDesignVector = Eigen::Matrix<double, 8, 1>;

struct PadConfig {
  double ground_gap = 100.0;
  Point2d footprint_limit{800.0, 800.0};
  double frame_width = 200.0;  // ground frame extends this far past the footprint box plus gap
  int degree = 3;
  double chord_tolerance = 0.5;
  double min_pad_separation = 2.0;  // closest approach of the two pads
};

/// A two-pad floating transmon with its ground frame. The upper pad is
/// `outline`; the lower pad is its reflection through y = 0 (the junction
/// sits at the origin).
struct PadLayout {
  std::string kind;
  Eigen::VectorXd design;  // empty for baselines that are not spline-based
  double ground_gap = 100.0;
  Point2d footprint_limit{800.0, 800.0};
  Polygon outline;
  std::optional<double> mirror_axis_x;  // outline is symmetric about x = value
  double wire_length = 0.0;             // junction-to-pad arm length implied by the layout
  Layout model;

  Box2 pads_bounding_box() const;
};

PadLayout build_pad_outline(const PadDesignVector& v, const PadConfig& config = {});

/// Wraps two pad polygons in a ground frame and checks footprint, gap, and
/// well-formedness. Shared by spline pads and baselines.
PadLayout assemble_pad_layout(std::string kind, PolygonSet pad_plus, PolygonSet pad_minus, const PadConfig& config,
                              double wire_length);

/// Throws InfeasibleGeometry naming the first violated invariant.
void validate_pad_layout(const PadLayout& layout, double tolerance = 1e-6);

}  // namespace tlsopt
