#include "tlsopt/geometry/layout.hpp"

#include "tlsopt/error.hpp"
#include "tlsopt/geometry/polygon_ops.hpp"

namespace tlsopt {

std::string to_string(ConductorRole role) {
  switch (role) {
    case ConductorRole::PadPlus: return "pad_plus";
    case ConductorRole::PadMinus: return "pad_minus";
    case ConductorRole::Ground: return "ground";
  }
  return "?";
}

ConductorRole conductor_role_from_string(const std::string& s) {
  if (s == "pad_plus") return ConductorRole::PadPlus;
  if (s == "pad_minus") return ConductorRole::PadMinus;
  if (s == "ground") return ConductorRole::Ground;
  throw ConfigError("unknown conductor role '" + s + "'");
}

PolygonSet Layout::metal() const {
  PolygonSet all;
  for (const auto& c : conductors) all.insert(all.end(), c.shape.begin(), c.shape.end());
  return all;
}

int Layout::index_of(ConductorRole role) const {
  for (std::size_t i = 0; i < conductors.size(); ++i)
    if (conductors[i].role == role) return static_cast<int>(i);
  return -1;
}

Layout scaled(const Layout& layout, double factor) {
  Layout out = layout;
  for (auto& c : out.conductors)
    for (auto& p : c.shape) p = transformed(p, [&](const Point2d& q) { return Point2d(factor * q); });
  if (!layout.gap_domain.empty()) {
    out.gap_domain.min = factor * layout.gap_domain.min;
    out.gap_domain.max = factor * layout.gap_domain.max;
  }
  return out;
}

}  // namespace tlsopt
