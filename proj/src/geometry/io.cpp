#include "tlsopt/geometry/io.hpp"

#include "tlsopt/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tlsopt {
namespace {

nlohmann::json ring_json(const Ring& r) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& p : r) a.push_back({p.x(), p.y()});
  return a;
}

Ring ring_from(const nlohmann::json& j) {
  Ring r;
  for (const auto& p : j) r.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  if (r.size() < 3) throw InfeasibleGeometry("polygon ring with fewer than 3 vertices");
  return r;
}

PolygonSet set_from(const nlohmann::json& j) {
  PolygonSet s;
  for (const auto& p : j) s.push_back(polygon_from_json(p));
  return s;
}

// 64-bit FNV-1a
std::string fnv_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void svg_path(std::ostream& out, const Polygon& poly) {
  const auto ring = [&](const Ring& r) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i == 0 ? 'M' : 'L') << r[i].x() << ',' << r[i].y() << ' ';
    out << "Z ";
  };
  ring(poly.outer);
  for (const auto& h : poly.holes) ring(h);
}

const char* role_colour(ConductorRole role) {
  switch (role) {
    case ConductorRole::PadPlus: return "#c0504d";
    case ConductorRole::PadMinus: return "#4f81bd";
    case ConductorRole::Ground: return "#9e9e9e";
  }
  return "#000000";
}

}  // namespace

std::string GeometryBundle::id() const {
  std::string s = pad ? pad->kind : "";
  if (wire) s += (s.empty() ? "" : "+") + wire_kind;
  return s.empty() ? "empty" : s;
}

std::string GeometryBundle::digest() const { return fnv_hex(to_json(*this).dump()); }

nlohmann::json to_json(const Polygon& poly) {
  nlohmann::json holes = nlohmann::json::array();
  for (const auto& h : poly.holes) holes.push_back(ring_json(h));
  return {{"outer", ring_json(poly.outer)}, {"holes", holes}};
}

Polygon polygon_from_json(const nlohmann::json& j) {
  Polygon p;
  p.outer = ring_from(j.at("outer"));
  if (j.contains("holes"))
    for (const auto& h : j.at("holes")) p.holes.push_back(ring_from(h));
  return p;
}

nlohmann::json to_json(const PadLayout& layout, const PadConfig& config) {
  nlohmann::json conductors = nlohmann::json::array();
  for (const auto& c : layout.model.conductors) {
    nlohmann::json polys = nlohmann::json::array();
    for (const auto& p : c.shape) polys.push_back(to_json(p));
    conductors.push_back({{"name", c.name}, {"role", to_string(c.role)}, {"outer_is_edge", c.outer_is_edge},
                          {"polygons", polys}});
  }
  nlohmann::json j = {{"kind", layout.kind},
                      {"units", "um"},
                      {"ground_gap", layout.ground_gap},
                      {"footprint_limit", {layout.footprint_limit.x(), layout.footprint_limit.y()}},
                      {"frame_width", config.frame_width},
                      {"min_pad_separation", config.min_pad_separation},
                      {"wire_length", layout.wire_length},
                      {"conductors", conductors}};
  const Point2d size = layout.pads_bounding_box().size();
  j["footprint"] = {size.x(), size.y()};
  j["design"] = layout.design.size() ? nlohmann::json(std::vector<double>(layout.design.data(),
                                                                          layout.design.data() + layout.design.size()))
                                     : nlohmann::json(nullptr);
  j["mirror_axis_x"] = layout.mirror_axis_x ? nlohmann::json(*layout.mirror_axis_x) : nlohmann::json(nullptr);
  return j;
}

PadLayout pad_layout_from_json(const nlohmann::json& j) {
  try {
    PadConfig c;
    c.ground_gap = j.at("ground_gap").get<double>();
    c.footprint_limit = Point2d(j.at("footprint_limit").at(0).get<double>(), j.at("footprint_limit").at(1).get<double>());
    c.frame_width = j.value("frame_width", c.frame_width);
    c.min_pad_separation = j.value("min_pad_separation", c.min_pad_separation);
    PolygonSet plus, minus;
    for (const auto& cj : j.at("conductors")) {
      const ConductorRole role = conductor_role_from_string(cj.at("role").get<std::string>());
      if (role == ConductorRole::PadPlus) plus = set_from(cj.at("polygons"));
      if (role == ConductorRole::PadMinus) minus = set_from(cj.at("polygons"));
    }
    if (plus.empty() || minus.empty()) throw InfeasibleGeometry("pad geometry needs pad_plus and pad_minus polygons");
    PadLayout layout = assemble_pad_layout(j.at("kind").get<std::string>(), std::move(plus), std::move(minus), c,
                                           j.at("wire_length").get<double>());
    if (j.contains("design") && !j["design"].is_null()) {
      const auto d = j["design"].get<std::vector<double>>();
      layout.design = Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
    }
    if (j.contains("mirror_axis_x") && !j["mirror_axis_x"].is_null()) layout.mirror_axis_x = j["mirror_axis_x"].get<double>();
    validate_pad_layout(layout);
    return layout;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed pad geometry: ") + e.what());
  }
}

nlohmann::json to_json(const WireProfile& wire, int profile_samples) {
  nlohmann::json prof = nlohmann::json::array();
  for (int i = 0; i < profile_samples; ++i) {
    const double y = wire.wire_length() * i / (profile_samples - 1);
    prof.push_back({y, wire.half_width(y)});
  }
  const auto& d = wire.design();
  return {{"design", {d(0), d(1), d(2), d(3)}},
          {"wire_length", wire.wire_length()},
          {"junction_half_width", wire.junction_half_width()},
          {"degree", wire.curve().degree()},
          {"control_y", wire.control_y()},
          {"profile", prof}};
}

WireProfile wire_profile_from_json(const nlohmann::json& j) {
  try {
    const auto d = j.at("design").get<std::vector<double>>();
    if (d.size() != 4) throw ConfigError("wire design needs 4 values");
    return WireProfile(WireDesignVector(d[0], d[1], d[2], d[3]), j.at("wire_length").get<double>(),
                       j.at("junction_half_width").get<double>(), j.value("degree", 3));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed wire geometry: ") + e.what());
  }
}

nlohmann::json to_json(const GeometryBundle& g) {
  nlohmann::json j = {{"units", "um"}, {"id", g.id()}};
  j["pad"] = g.pad ? to_json(*g.pad) : nlohmann::json(nullptr);
  if (g.wire) {
    j["wire"] = to_json(*g.wire);
    j["wire"]["kind"] = g.wire_kind;
  } else {
    j["wire"] = nullptr;
  }
  return j;
}

GeometryBundle geometry_from_json(const nlohmann::json& j) {
  GeometryBundle g;
  if (j.contains("pad") && !j["pad"].is_null()) g.pad = pad_layout_from_json(j["pad"]);
  if (j.contains("wire") && !j["wire"].is_null()) {
    g.wire = wire_profile_from_json(j["wire"]);
    g.wire_kind = j["wire"].value("kind", g.wire_kind);
    g.junction_width = 2.0 * g.wire->junction_half_width();
  }
  // a bare pad or wire document is accepted too
  if (!g.pad && !g.wire && j.contains("conductors")) g.pad = pad_layout_from_json(j);
  if (!g.pad && !g.wire && j.contains("design") && j.contains("junction_half_width")) {
    g.wire = wire_profile_from_json(j);
    g.junction_width = 2.0 * g.wire->junction_half_width();
  }
  if (!g.pad && !g.wire) throw ConfigError("geometry document holds neither a pad nor a wire");
  return g;
}

void save_geometry(const std::string& path, const GeometryBundle& g) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << to_json(g).dump(2) << '\n';
}

GeometryBundle load_geometry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read geometry file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("geometry file " + path + " is not valid JSON: " + e.what());
  }
  return geometry_from_json(j);
}

std::string to_svg(const GeometryBundle& g, const WireModelConfig& wire_model) {
  Box2 box;
  std::vector<std::pair<ConductorRole, Polygon>> shapes;
  if (g.pad)
    for (const auto& c : g.pad->model.conductors)
      for (const auto& p : c.shape) shapes.emplace_back(c.role, p);
  if (g.wire) {
    const Layout w = wire_model_layout(*g.wire, wire_model);
    for (const auto& c : w.conductors)
      for (const auto& p : c.shape) shapes.emplace_back(c.role, p);
  }
  for (const auto& [role, p] : shapes)
    for (const auto& q : p.outer) box.extend(q);
  const Point2d pad = Point2d::Constant(0.02 * std::max(box.size().x(), box.size().y()));
  box.min -= pad;
  box.max += pad;

  std::ostringstream out;
  out.precision(10);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << box.min.x() << ' ' << -box.max.y() << ' '
      << box.size().x() << ' ' << box.size().y() << "\" width=\"" << box.size().x() << "\" height=\"" << box.size().y()
      << "\">\n<g transform=\"scale(1,-1)\" stroke=\"black\" stroke-width=\"0.5\" fill-rule=\"evenodd\">\n";
  for (const auto& [role, p] : shapes) {
    out << "<path fill=\"" << role_colour(role) << "\" fill-opacity=\"0.6\" d=\"";
    svg_path(out, p);
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

void save_svg(const std::string& path, const GeometryBundle& g, const WireModelConfig& wire_model) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << to_svg(g, wire_model);
}

}  // namespace tlsopt
