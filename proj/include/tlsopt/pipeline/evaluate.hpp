#pragma once

#include "tlsopt/field/edge2d.hpp"
#include "tlsopt/field/mom.hpp"
#include "tlsopt/field/wire_field.hpp"
#include "tlsopt/geometry/io.hpp"
#include "tlsopt/participation/participation.hpp"

#include <json.hpp>

#include <optional>

namespace tlsopt {

struct SolverSettings {
  MeshConfig mesh;  // pad model, level 0
  int mesh_level = 1;
  SolverConfig solver;
  RegionPartition regions;
  double film_thickness = 0.1;  // µm, edge problem
  EdgeProblemConfig edge;
  WireFieldConfig wire;
  double junction_shunt_ff = 0.0;
  double differential_voltage = 1.0;
  // Objective evaluated one level finer as well; the finer value is used.
  bool refinement_check = false;

  MeshConfig pad_mesh(int extra_levels = 0) const { return mesh.refined(mesh_level + extra_levels); }
  WireFieldConfig wire_config(int extra_levels = 0) const;
  void validate() const;
};

nlohmann::json to_json(const SolverSettings& s);
SolverSettings solver_settings_from_json(const nlohmann::json& j);

/// What the pad optimizer needs per design: interior MS participation,
/// charging energy and the stored energy of the differential excitation.
struct PadSolve {
  double interior_ms = 0.0;
  double ec_ghz = 0.0;
  double energy = 0.0;  // J
  Eigen::MatrixXd capacitance;
  std::size_t panels = 0;
};

PadSolve solve_pad_interior(const PadLayout& pad, const MaterialStack& stack, const SolverSettings& settings,
                            int extra_levels = 0);

struct PadEvaluation {
  std::array<RegionParticipation, 3> p{};
  double ec_ghz = 0.0;
  double energy = 0.0;
  Eigen::MatrixXd capacitance;
  std::size_t panels = 0;
  std::size_t gap_cells = 0;
};

/// Full pad participation: every layer, every region, with edge scaling F.
PadEvaluation evaluate_pad(const PadLayout& pad, const MaterialStack& stack, const SolverSettings& settings,
                           const std::array<double, 3>& F, int extra_levels = 0);

struct WireEvaluation {
  std::array<double, 3> p{};  // SA stays 0
  CenterlineField field;
};

/// Wire MS and MA participation normalized by the qubit energy `energy`.
WireEvaluation evaluate_wire(const WireProfile& wire, const MaterialStack& stack, const SolverSettings& settings,
                             double energy, int extra_levels = 0);

/// Edge scaling factors for the stack and film thickness in `settings`.
std::array<double, 3> edge_scaling(const MaterialStack& stack, const SolverSettings& settings);

/// Stored energy of the default double-pad baseline, used to normalize a
/// wire evaluated without a pad.
double reference_pad_energy(const MaterialStack& stack, const SolverSettings& settings);

/// Report for a pad, a wire, or both. The wire is normalized by the pad's
/// energy when there is a pad, else by `wire_energy` or the reference pad.
/// With `refinement_delta` the evaluation is repeated one mesh level finer
/// and the largest relative change of a layer total is recorded.
ParticipationReport evaluate_geometry(const GeometryBundle& g, const MaterialStack& stack,
                                      const SolverSettings& settings, double f01_ghz, bool refinement_delta = true,
                                      std::optional<double> wire_energy = std::nullopt);

}  // namespace tlsopt
