#pragma once

#include "tlsopt/geometry/pad.hpp"
#include "tlsopt/geometry/wire.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace tlsopt {

/// What a geometry file holds: a pad layout, a junction wire, or both.
struct GeometryBundle {
  std::optional<PadLayout> pad;
  std::optional<WireProfile> wire;
  std::string wire_kind = "spline_wire";
  double junction_width = 1.0;  // µm, for the wire

  /// "pad kind+wire kind".
  std::string id() const;
  /// Short digest of the serialized geometry, for provenance.
  std::string digest() const;
};

nlohmann::json to_json(const Polygon& poly);
Polygon polygon_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PadLayout& layout, const PadConfig& config = {});
/// Rebuilds the layout from its stored pad polygons, so ground frame and
/// validation follow the same path as a fresh build.
PadLayout pad_layout_from_json(const nlohmann::json& j);

nlohmann::json to_json(const WireProfile& wire, int profile_samples = 101);
WireProfile wire_profile_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GeometryBundle& g);
GeometryBundle geometry_from_json(const nlohmann::json& j);

void save_geometry(const std::string& path, const GeometryBundle& g);
GeometryBundle load_geometry(const std::string& path);

/// Outline drawing, 1 user unit = 1 µm, y up. The wire model (with its pad
/// stubs) is drawn at the junction when present.
std::string to_svg(const GeometryBundle& g, const WireModelConfig& wire_model = {});
void save_svg(const std::string& path, const GeometryBundle& g, const WireModelConfig& wire_model = {});

}  // namespace tlsopt
