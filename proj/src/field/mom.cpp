#include "tlsopt/field/mom.hpp"

#include "tlsopt/error.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <sstream>

namespace tlsopt {
namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

void HalfSpaceDielectric::validate() const {
  if (!(eps_substrate >= 1.0)) throw ConfigError("eps_substrate must be >= 1");
}

ElectrostaticModel::ElectrostaticModel(PanelMesh mesh, HalfSpaceDielectric dielectric, SolverConfig config)
    : mesh_(std::move(mesh)), dielectric_(dielectric), config_(config) {
  dielectric_.validate();
  const std::size_t n = mesh_.size();
  if (n == 0) throw SolverError("empty mesh");
  for (const auto& p : mesh_.panels)
    if (p.conductor < 0 || p.conductor >= mesh_.conductor_count())
      throw SolverError("panel refers to an unknown conductor");

  Eigen::MatrixXd a(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) a(i, j) = kernel_potential(j, mesh_.panels[i].collocation);

  lu_.compute(a);
  rcond_ = lu_.rcond();
  if (!(rcond_ > config_.rcond_tolerance)) {
    std::ostringstream msg;
    msg << "system matrix is singular or ill-conditioned (rcond estimate " << rcond_ << ", " << n
        << " panels); duplicate or overlapping panels?";
    throw SolverError(msg.str());
  }
}

double ElectrostaticModel::kernel_potential(std::size_t j, const Point2d& p) const {
  const Panel& src = mesh_.panels[j];
  if ((p - src.centroid()).norm() > config_.far_field_ratio * src.diameter)
    return kernel::far_potential(src.moments, p);
  return kernel::ring_potential(src.shape.outer, p);
}

ChargeSolution ElectrostaticModel::solve(const Eigen::VectorXd& conductor_potentials) const {
  const int nc = mesh_.conductor_count();
  if (conductor_potentials.size() != nc)
    throw SolverError("expected " + std::to_string(nc) + " conductor potentials, got " +
                      std::to_string(conductor_potentials.size()));
  const std::size_t n = mesh_.size();
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs(i) = conductor_potentials(mesh_.panels[i].conductor);

  ChargeSolution s;
  s.potentials = conductor_potentials;
  s.strength = lu_.solve(rhs);
  if (!s.strength.allFinite()) throw SolverError("solution contains non-finite values");
  const double scale = 4.0 * kPi * kEpsilon0 * dielectric_.eps_eff() * 1e6;
  s.sigma = s.strength * scale;
  s.charge.resize(n);
  s.conductor_charge = Eigen::VectorXd::Zero(nc);
  for (std::size_t i = 0; i < n; ++i) {
    s.charge(i) = s.sigma(i) * mesh_.panels[i].area() * 1e-12;
    s.conductor_charge(mesh_.panels[i].conductor) += s.charge(i);
  }
  s.total_energy = 0.5 * s.conductor_charge.dot(conductor_potentials);
  return s;
}

CapacitanceMatrix ElectrostaticModel::capacitance() const {
  const int nc = mesh_.conductor_count();
  Eigen::MatrixXd raw(nc, nc);
  for (int k = 0; k < nc; ++k) raw.col(k) = solve(Eigen::VectorXd::Unit(nc, k)).conductor_charge;
  CapacitanceMatrix out;
  const double scale = raw.cwiseAbs().maxCoeff();
  out.asymmetry = scale > 0 ? (raw - raw.transpose()).cwiseAbs().maxCoeff() / scale : 0.0;
  out.C = 0.5 * (raw + raw.transpose());
  return out;
}

double ElectrostaticModel::potential_at(const ChargeSolution& s, const Point2d& p) const {
  double v = 0.0;
  for (std::size_t j = 0; j < mesh_.size(); ++j) v += s.strength(j) * kernel_potential(j, p);
  return v;
}

Eigen::Matrix2Xd ElectrostaticModel::inplane_field(const ChargeSolution& s, const std::vector<Point2d>& points,
                                                   int* nudged) const {
  Eigen::Matrix2Xd out(2, points.size());
  int moved = 0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    Point2d p = points[k];
    Point2d e = Point2d::Zero();
    for (int attempt = 0; attempt < 4; ++attempt) {
      e.setZero();
      int hit = -1;
      for (std::size_t j = 0; j < mesh_.size() && hit < 0; ++j) {
        const Panel& src = mesh_.panels[j];
        if ((p - src.centroid()).norm() > 2.0 * config_.far_field_ratio * src.diameter) {
          e += s.strength(j) * kernel::far_field(src.moments, p);
          continue;
        }
        bool on_edge = false;
        e += s.strength(j) * kernel::ring_field(src.shape.outer, p, &on_edge);
        if (on_edge) hit = static_cast<int>(j);
      }
      if (hit < 0) break;
      const Panel& src = mesh_.panels[hit];
      Point2d dir = p - src.centroid();
      dir = dir.norm() > 0 ? Point2d(dir.normalized()) : Point2d(1.0, 0.0);
      p += 1e-3 * src.diameter * dir;
      ++moved;
      spdlog::warn("field sample ({}, {}) lies on a panel edge; nudged by {:.3g} um", points[k].x(), points[k].y(),
                   1e-3 * src.diameter);
    }
    out.col(k) = 1e6 * e;
  }
  if (nudged) *nudged = moved;
  return out;
}

ChargeSolution solve_charges(const PanelMesh& mesh, const HalfSpaceDielectric& dielectric,
                             const Eigen::VectorXd& conductor_potentials) {
  if (conductor_potentials.cwiseAbs().maxCoeff() == 0.0)
    throw SolverError("at least one conductor must be at a nonzero potential");
  return ElectrostaticModel(mesh, dielectric).solve(conductor_potentials);
}

CapacitanceMatrix capacitance_matrix(const PanelMesh& mesh, const HalfSpaceDielectric& dielectric) {
  return ElectrostaticModel(mesh, dielectric).capacitance();
}

Eigen::VectorXd metal_surface_field(const ChargeSolution& s, const HalfSpaceDielectric& dielectric) {
  return s.sigma.cwiseAbs() / (kEpsilon0 * (1.0 + dielectric.eps_substrate));
}

InterfaceFields interface_fields(const ElectrostaticModel& model, const ChargeSolution& s, const PanelMesh& gap) {
  InterfaceFields f;
  f.metal = metal_surface_field(s, model.dielectric());
  std::vector<Point2d> pts;
  pts.reserve(gap.size());
  f.substrate_area.resize(gap.size());
  for (std::size_t k = 0; k < gap.size(); ++k) {
    pts.push_back(gap.panels[k].collocation);
    f.substrate_area(k) = gap.panels[k].area();
  }
  f.substrate = model.inplane_field(s, pts, &f.nudged);
  return f;
}

}  // namespace tlsopt
