#pragma once

#include "tlsopt/field/mesh.hpp"

#include <Eigen/Dense>

#include <vector>

namespace tlsopt {

constexpr double kEpsilon0 = 8.8541878128e-12;  // F/m

/// Conductor plane z = 0 with substrate below and vacuum above.
struct HalfSpaceDielectric {
  double eps_substrate = 11.7;

  double eps_eff() const { return 0.5 * (1.0 + eps_substrate); }
  void validate() const;
};

struct SolverConfig {
  // Source panels farther than this many diameters use the multipole form.
  double far_field_ratio = 3.0;
  // Reciprocal condition estimate below which the system counts as singular.
  double rcond_tolerance = 1e-12;
};

struct ChargeSolution {
  Eigen::VectorXd sigma;       // C/m^2 per panel
  Eigen::VectorXd charge;      // C per panel
  Eigen::VectorXd potentials;  // V per conductor
  Eigen::VectorXd conductor_charge;
  double total_energy = 0.0;  // J
  // sigma / (4 pi eps0 eps_eff) in V/µm; potentials and fields are linear
  // sums of these with the geometric kernels.
  Eigen::VectorXd strength;
};

struct CapacitanceMatrix {
  Eigen::MatrixXd C;  // F, symmetrized
  double asymmetry = 0.0;  // max |C - C^T| / max |C| before symmetrization
};

/// Collocation method-of-moments model of the meshed conductors. The system
/// matrix is factorized once; every solve afterwards is a back substitution.
/// Immutable after construction, so concurrent solves are safe.
class ElectrostaticModel {
 public:
  ElectrostaticModel(PanelMesh mesh, HalfSpaceDielectric dielectric, SolverConfig config = {});

  ChargeSolution solve(const Eigen::VectorXd& conductor_potentials) const;
  CapacitanceMatrix capacitance() const;

  /// Potential (V) at an in-plane point.
  double potential_at(const ChargeSolution& s, const Point2d& p) const;
  /// In-plane field (V/m) at off-metal points. Points lying on a panel edge
  /// are nudged by 1e-3 of that panel's size; `nudged` counts them.
  Eigen::Matrix2Xd inplane_field(const ChargeSolution& s, const std::vector<Point2d>& points,
                                 int* nudged = nullptr) const;

  const PanelMesh& mesh() const { return mesh_; }
  const HalfSpaceDielectric& dielectric() const { return dielectric_; }
  double rcond() const { return rcond_; }

 private:
  double kernel_potential(std::size_t j, const Point2d& p) const;

  PanelMesh mesh_;
  HalfSpaceDielectric dielectric_;
  SolverConfig config_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double rcond_ = 0.0;
};

ChargeSolution solve_charges(const PanelMesh& mesh, const HalfSpaceDielectric& dielectric,
                             const Eigen::VectorXd& conductor_potentials);
CapacitanceMatrix capacitance_matrix(const PanelMesh& mesh, const HalfSpaceDielectric& dielectric);

/// Field magnitude (V/m) just above and just below each panel. For charge on
/// the interface plane both sides see sigma / (eps0 (1 + eps_sub)).
Eigen::VectorXd metal_surface_field(const ChargeSolution& s, const HalfSpaceDielectric& dielectric);

struct InterfaceFields {
  Eigen::VectorXd metal;       // V/m per conductor panel, normal to the film
  Eigen::Matrix2Xd substrate;  // V/m in-plane at each gap sample
  Eigen::VectorXd substrate_area;  // µm^2 per gap sample
  int nudged = 0;
};

/// On-metal normal fields on every panel and in-plane fields at the
/// collocation points of the gap sample cells.
InterfaceFields interface_fields(const ElectrostaticModel& model, const ChargeSolution& s, const PanelMesh& gap);

}  // namespace tlsopt
