#pragma once

#include "tlsopt/field/mom.hpp"
#include "tlsopt/field/wire_field.hpp"
#include "tlsopt/participation/materials.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <array>
#include <cmath>
#include <optional>
#include <string>

namespace tlsopt {

// Field inside each thin interface layer from the field in the adjacent
// bulk medium (V/m).
inline double ms_layer_field(double substrate_normal, const MaterialStack& s) {
  return s.eps_substrate / s.layer(Interface::MS).eps_r * substrate_normal;
}
inline double ma_layer_field(double vacuum_normal, const MaterialStack& s) {
  return vacuum_normal / s.layer(Interface::MA).eps_r;
}
inline double sa_layer_field(double tangential, double substrate_normal, const MaterialStack& s) {
  return std::hypot(tangential, s.eps_substrate / s.layer(Interface::SA).eps_r * substrate_normal);
}

/// (t eps0 eps_r / 2W) * sum_k E_k^2 A_k with layer-internal fields E (V/m),
/// quadrature areas A (µm^2) and W in J. Empty regions give 0.
double surface_participation(const Eigen::VectorXd& layer_field, const Eigen::VectorXd& area_um2,
                             const MaterialLayer& layer, double energy);

struct EdgeScaled {
  double diverging = 0.0;
  double perimeter = 0.0;
};

EdgeScaled apply_edge_scaling(double p_accurate, double F);

/// 2 t eps ∫ E(y)^2 r(y) [ln(4 r / t) + 5] dy / W over both wires, with
/// layer-internal fields E (V/m) and half-widths r (µm) on cells of height
/// dy (µm). Throws InfeasibleGeometry where r <= t/4.
double wire_participation(const Eigen::VectorXd& layer_field, const Eigen::VectorXd& half_width,
                          const Eigen::VectorXd& dy, const MaterialLayer& layer, double energy);

struct QualityFactor {
  double value = 0.0;
  bool unbounded = false;
};

/// 1 / sum_i p_i tan(delta_i); p in absolute units (not ppm).
QualityFactor q_tls(const std::array<double, 3>& p, const MaterialStack& stack);

/// Lateral distance bands measured from the metal edge (µm).
struct RegionPartition {
  double x0 = 1.0;
  double accurate_boundary() const { return 0.5 * x0; }
};

enum class Region { Interior, Accurate, Diverging };

/// Region of a mesh panel from its band range; throws MeshError if the panel
/// straddles a region boundary.
Region classify(const Panel& panel, const RegionPartition& regions);

struct RegionParticipation {
  double interior = 0.0;
  double accurate = 0.0;
  double diverging = 0.0;

  double perimeter() const { return accurate + diverging; }
  double total() const { return interior + accurate + diverging; }
};

/// Pad-model participation per layer and region. Diverging bands are not
/// sampled; they come from the accurate band times F.
std::array<RegionParticipation, 3> pad_participation(const PanelMesh& metal, const PanelMesh& gap,
                                                     const InterfaceFields& fields, double energy,
                                                     const MaterialStack& stack, const RegionPartition& regions,
                                                     const std::array<double, 3>& F);

struct ParticipationReport {
  std::string geometry_id;
  std::string geometry_digest;
  std::string material_preset;
  int mesh_level = 0;
  std::array<RegionParticipation, 3> pad{};  // indexed by Interface
  std::array<double, 3> wire{};              // SA entry stays 0
  std::array<double, 3> F{};
  bool has_wire = false;
  double f01_ghz = 5.0;
  double ec_ghz = 0.0;
  double energy = 0.0;  // J, pad model
  QualityFactor q;
  double t1_us = 0.0;
  std::optional<double> refinement_delta;  // max relative change of p against the next level

  double total(Interface i) const { return pad[static_cast<int>(i)].total() + wire[static_cast<int>(i)]; }
  /// Interior + accurate only, no edge extrapolation.
  double accurate_total(Interface i) const;
  std::array<double, 3> totals() const;
  /// Recomputes Q and T1 from the stored p values.
  void finalize(const MaterialStack& stack);
};

nlohmann::json to_json(const ParticipationReport& r);
ParticipationReport report_from_json(const nlohmann::json& j);

}  // namespace tlsopt
