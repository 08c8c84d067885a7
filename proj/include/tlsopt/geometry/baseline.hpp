#pragma once

#include "tlsopt/geometry/pad.hpp"
#include "tlsopt/geometry/wire.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace tlsopt {

enum class BaselineKind { DoublePad, Concentric, StraightWire, LinearTaper };

BaselineKind baseline_kind_from_string(const std::string& name);
std::string to_string(BaselineKind kind);
std::vector<std::string> baseline_names();

using BaselineParams = std::map<std::string, double>;
using BaselineGeometry = std::variant<PadLayout, WireProfile>;

/// Reference geometries. Recognised parameters (µm unless noted):
///   double_pad:    width (800), height (600), gap (80)
///   concentric:    outer_diameter (800), inner_radius (200), ring_gap (80)
///   straight_wire: width (1), length (81)
///   linear_taper:  slope (0.4, dimensionless), junction_width (1), length (81)
BaselineGeometry make_baseline(BaselineKind kind, const BaselineParams& params = {}, const PadConfig& pad_config = {});
BaselineGeometry make_baseline(const std::string& kind, const BaselineParams& params = {},
                               const PadConfig& pad_config = {});

PadLayout double_pad(double width, double height, double gap, const PadConfig& config = {});
PadLayout concentric(double outer_diameter, double inner_radius, double ring_gap, const PadConfig& config = {});
WireProfile straight_wire(double width, double length);
WireProfile linear_taper(double slope, double junction_width, double length);

}  // namespace tlsopt
