#pragma once

#include "tlsopt/participation/materials.hpp"

#include <array>

namespace tlsopt {

/// Cross-section of a semi-infinite film edge: metal occupies x >= 0,
/// 0 <= z <= thickness at 1 V, substrate fills z < 0, vacuum above. The box
/// boundary is grounded except the face the film runs into, which is a
/// symmetry (zero normal derivative) face. Lengths in µm.
struct EdgeProblemConfig {
  double half_extent = 100.0;     // box is [-h, h]^2
  double finest_spacing = 5e-4;   // grid spacing at the film corners
  double growth = 1.15;           // spacing ratio of neighbouring cells
  int refinement_level = 0;       // halves the finest spacing and the growth excess per level
  bool mirrored = false;          // film on x <= 0 instead
};

struct EdgeProblemSolution {
  double film_thickness = 0.0;  // µm
  double x0 = 0.0;
  // Lineal energy densities (J/m) per interface layer, indexed by Interface.
  std::array<double, 3> energy_accurate{};
  std::array<double, 3> energy_diverging{};
  std::array<double, 3> F{};
  std::size_t unknowns = 0;

  double scaling(Interface i) const { return F[static_cast<int>(i)]; }
};

/// Finite-volume Laplace solve on a graded tensor grid. Each layer is
/// integrated along its own interface line: MS under the film, MA on top of
/// it, SA on the bare substrate. Bands: diverging [t_i, 0.5 x0], accurate
/// [0.5 x0, x0] in lateral distance from the edge.
EdgeProblemSolution solve_edge_problem(double film_thickness, double x0, const MaterialStack& layers,
                                       const EdgeProblemConfig& config = {});

}  // namespace tlsopt
