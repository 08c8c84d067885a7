#include "tlsopt/participation/participation.hpp"

#include "tlsopt/error.hpp"
#include "tlsopt/participation/transmon.hpp"

#include <spdlog/spdlog.h>

#include <cmath>

namespace tlsopt {
namespace {

constexpr double kTol = 1e-9;

nlohmann::json ppm(double p) { return p * 1e6; }

}  // namespace

double surface_participation(const Eigen::VectorXd& layer_field, const Eigen::VectorXd& area_um2,
                             const MaterialLayer& layer, double energy) {
  if (!(energy > 0.0)) throw SolverError("participation needs a positive stored energy");
  if (layer_field.size() != area_um2.size()) throw SolverError("field and area sample counts differ");
  if (layer_field.size() == 0) {
    spdlog::warn("{} region has no field samples; participation set to 0", to_string(layer.name));
    return 0.0;
  }
  const double integral = (layer_field.array().square() * area_um2.array()).sum() * 1e-12;
  return layer.thickness_nm * 1e-9 * kEpsilon0 * layer.eps_r / (2.0 * energy) * integral;
}

EdgeScaled apply_edge_scaling(double p_accurate, double F) {
  return {F * p_accurate, p_accurate * (1.0 + F)};
}

double wire_participation(const Eigen::VectorXd& layer_field, const Eigen::VectorXd& half_width,
                          const Eigen::VectorXd& dy, const MaterialLayer& layer, double energy) {
  if (!(energy > 0.0)) throw SolverError("participation needs a positive stored energy");
  const Eigen::Index n = dy.size();
  if (layer_field.size() != n || half_width.size() != n || n == 0)
    throw SolverError("wire samples are inconsistent");
  const double t = layer.thickness_nm * 1e-3;  // µm
  double acc = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double r = half_width(k);
    if (r <= 0.25 * t)
      throw InfeasibleGeometry("wire half-width " + std::to_string(r) + " um is below t/4; outside the flat-coax model");
    acc += layer_field(k) * layer_field(k) * r * (std::log(4.0 * r / t) + 5.0) * dy(k);
  }
  // t [m] * eps * E^2 [V^2/m^2] * r [m] * dy [m]
  const double upper = layer.thickness_nm * 1e-9 * kEpsilon0 * layer.eps_r * acc * 1e-12;
  return 2.0 * upper / energy;
}

QualityFactor q_tls(const std::array<double, 3>& p, const MaterialStack& stack) {
  double loss = 0.0;
  for (auto i : kInterfaces) {
    const double pi = p[static_cast<int>(i)];
    if (pi < 0.0) throw SolverError("negative participation");
    loss += pi * stack.layer(i).tan_delta;
  }
  if (loss == 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {1.0 / loss, false};
}

Region classify(const Panel& panel, const RegionPartition& regions) {
  const double x0 = regions.x0;
  const double half = regions.accurate_boundary();
  if (panel.band_inner >= x0 - kTol) return Region::Interior;
  if (panel.band_inner >= half - kTol && panel.band_outer <= x0 + kTol) return Region::Accurate;
  if (panel.band_outer <= half + kTol) return Region::Diverging;
  throw MeshError("panel band [" + std::to_string(panel.band_inner) + ", " + std::to_string(panel.band_outer) +
                  "] straddles a region boundary");
}

std::array<RegionParticipation, 3> pad_participation(const PanelMesh& metal, const PanelMesh& gap,
                                                     const InterfaceFields& fields, double energy,
                                                     const MaterialStack& stack, const RegionPartition& regions,
                                                     const std::array<double, 3>& F) {
  std::array<RegionParticipation, 3> out{};
  // integrals of E_layer^2 dA (µm^2 (V/m)^2) per layer, interior and accurate
  std::array<std::array<double, 2>, 3> sum{};
  for (std::size_t k = 0; k < metal.size(); ++k) {
    const Region r = classify(metal.panels[k], regions);
    if (r == Region::Diverging) continue;
    const int slot = r == Region::Interior ? 0 : 1;
    const double a = metal.panels[k].area();
    const double ems = ms_layer_field(fields.metal(k), stack);
    const double ema = ma_layer_field(fields.metal(k), stack);
    sum[0][slot] += ems * ems * a;
    sum[1][slot] += ema * ema * a;
  }
  for (std::size_t k = 0; k < gap.size(); ++k) {
    const Region r = classify(gap.panels[k], regions);
    if (r == Region::Diverging) continue;
    const int slot = r == Region::Interior ? 0 : 1;
    const double esa = sa_layer_field(fields.substrate.col(k).norm(), 0.0, stack);
    sum[2][slot] += esa * esa * gap.panels[k].area();
  }
  for (auto i : kInterfaces) {
    const int k = static_cast<int>(i);
    const auto p = [&](double s) {
      return surface_participation(Eigen::VectorXd::Constant(1, std::sqrt(s)), Eigen::VectorXd::Ones(1),
                                   stack.layer(i), energy);
    };
    out[k].interior = p(sum[k][0]);
    out[k].accurate = p(sum[k][1]);
    out[k].diverging = apply_edge_scaling(out[k].accurate, F[k]).diverging;
  }
  return out;
}

double ParticipationReport::accurate_total(Interface i) const {
  const auto& r = pad[static_cast<int>(i)];
  return r.interior + r.accurate + wire[static_cast<int>(i)];
}

std::array<double, 3> ParticipationReport::totals() const {
  return {total(Interface::MS), total(Interface::MA), total(Interface::SA)};
}

void ParticipationReport::finalize(const MaterialStack& stack) {
  material_preset = stack.preset_name;
  q = q_tls(totals(), stack);
  t1_us = q.unbounded ? std::numeric_limits<double>::infinity() : t1_from_q(q.value, f01_ghz);
}

nlohmann::json to_json(const ParticipationReport& r) {
  nlohmann::json layers = nlohmann::json::object();
  for (auto i : kInterfaces) {
    const int k = static_cast<int>(i);
    layers[to_string(i)] = {{"interior_ppm", ppm(r.pad[k].interior)},
                            {"accurate_ppm", ppm(r.pad[k].accurate)},
                            {"diverging_ppm", ppm(r.pad[k].diverging)},
                            {"perimeter_ppm", ppm(r.pad[k].perimeter())},
                            {"wire_ppm", ppm(r.wire[k])},
                            {"total_ppm", ppm(r.total(i))},
                            {"accurate_only_total_ppm", ppm(r.accurate_total(i))},
                            {"F", r.F[k]}};
  }
  nlohmann::json j = {{"geometry_id", r.geometry_id},
                      {"geometry_digest", r.geometry_digest},
                      {"material_preset", r.material_preset},
                      {"mesh_level", r.mesh_level},
                      {"has_wire", r.has_wire},
                      {"layers", layers},
                      {"f01_ghz", r.f01_ghz},
                      {"ec_ghz", r.ec_ghz},
                      {"energy_J", r.energy}};
  if (r.q.unbounded) {
    j["q_tls"] = "unbounded";
    j["t1_us"] = "unbounded";
  } else {
    j["q_tls"] = r.q.value;
    j["t1_us"] = r.t1_us;
  }
  j["refinement_delta"] = r.refinement_delta ? nlohmann::json(*r.refinement_delta) : nlohmann::json();
  return j;
}

ParticipationReport report_from_json(const nlohmann::json& j) {
  ParticipationReport r;
  try {
    r.geometry_id = j.at("geometry_id").get<std::string>();
    r.geometry_digest = j.value("geometry_digest", "");
    r.material_preset = j.at("material_preset").get<std::string>();
    r.mesh_level = j.at("mesh_level").get<int>();
    r.has_wire = j.at("has_wire").get<bool>();
    r.f01_ghz = j.at("f01_ghz").get<double>();
    r.ec_ghz = j.at("ec_ghz").get<double>();
    r.energy = j.at("energy_J").get<double>();
    for (auto i : kInterfaces) {
      const int k = static_cast<int>(i);
      const auto& l = j.at("layers").at(to_string(i));
      r.pad[k].interior = l.at("interior_ppm").get<double>() * 1e-6;
      r.pad[k].accurate = l.at("accurate_ppm").get<double>() * 1e-6;
      r.pad[k].diverging = l.at("diverging_ppm").get<double>() * 1e-6;
      r.wire[k] = l.at("wire_ppm").get<double>() * 1e-6;
      r.F[k] = l.at("F").get<double>();
    }
    if (j.at("q_tls").is_string()) {
      r.q = {std::numeric_limits<double>::infinity(), true};
      r.t1_us = std::numeric_limits<double>::infinity();
    } else {
      r.q = {j.at("q_tls").get<double>(), false};
      r.t1_us = j.at("t1_us").get<double>();
    }
    if (j.contains("refinement_delta") && !j["refinement_delta"].is_null())
      r.refinement_delta = j["refinement_delta"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  return r;
}

}  // namespace tlsopt
