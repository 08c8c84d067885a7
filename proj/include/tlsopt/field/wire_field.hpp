#pragma once

#include "tlsopt/field/mom.hpp"
#include "tlsopt/geometry/wire.hpp"

namespace tlsopt {

struct WireFieldConfig {
  WireModelConfig model;
  MeshConfig mesh = default_mesh();
  int samples = 60;              // slices along the wire, >= 50
  // The span starts this far from the junction end; the end face is a metal
  // edge whose charge makes the integrand diverge like 1/y.
  double junction_cutoff = 0.5;
  double clustering = 3.0;  // slice heights grow as exp(clustering * u); 0 for uniform
  double differential_voltage = 1.0;

  static MeshConfig default_mesh() {
    MeshConfig m;
    m.edge_panel_length = 1.0;
    m.target_panel_size = 10.0;
    return m;
  }
};

/// Field along the wire centreline x = 0 of the upper electrode, from the
/// local two-electrode model at +-V/2. The line charge of each slice is read
/// off the panel charges and converted to the centreline surface charge with
/// the isolated-strip profile sigma(0) = lambda / (pi r).
struct CenterlineField {
  Eigen::VectorXd y;            // slice centres, µm from the junction end
  Eigen::VectorXd dy;           // slice heights, µm
  Eigen::VectorXd field;        // V/m, same on both sides of the film
  Eigen::VectorXd half_width;   // µm
  Eigen::VectorXd line_charge;  // C/m
  double voltage = 0.0;         // V between the electrodes
  double model_energy = 0.0;    // J stored in the local model
};

CenterlineField centerline_field(const WireProfile& wire, const HalfSpaceDielectric& dielectric,
                                 const WireFieldConfig& config = {});

}  // namespace tlsopt
