#pragma once

#include "tlsopt/geometry/types.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace tlsopt {

enum class ConductorRole { PadPlus, PadMinus, Ground };

std::string to_string(ConductorRole role);
ConductorRole conductor_role_from_string(const std::string& s);

struct Conductor {
  std::string name;
  ConductorRole role = ConductorRole::PadPlus;
  PolygonSet shape;
  // When false, the outer boundary is an artificial truncation (the ground
  // frame's far edge) rather than a physical metal edge: it is neither graded
  // in the mesh nor treated as an edge by the region partition.
  bool outer_is_edge = true;
};

/// Planar conductor arrangement handed to the field solver.
struct Layout {
  std::string kind;
  std::vector<Conductor> conductors;
  // Exposed-substrate window used for SA sampling; empty when the model has
  // no SA contribution (wire model).
  Box2 gap_domain;

  PolygonSet metal() const;
  int index_of(ConductorRole role) const;  // -1 when absent
};

Layout scaled(const Layout& layout, double factor);

}  // namespace tlsopt
