#include "tlsopt/pipeline/evaluate.hpp"

#include "tlsopt/geometry/baseline.hpp"
#include "tlsopt/participation/transmon.hpp"
#include "tlsopt/pipeline/json_fields.hpp"

#include <spdlog/spdlog.h>

#include <cmath>

namespace tlsopt {
namespace {

Eigen::VectorXd differential_potentials(const Layout& layout, double v) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.conductors.size()));
  for (std::size_t k = 0; k < layout.conductors.size(); ++k) {
    if (layout.conductors[k].role == ConductorRole::PadPlus) p(static_cast<Eigen::Index>(k)) = 0.5 * v;
    if (layout.conductors[k].role == ConductorRole::PadMinus) p(static_cast<Eigen::Index>(k)) = -0.5 * v;
  }
  return p;
}

double charging_energy(const Layout& layout, const Eigen::MatrixXd& C, double shunt_ff) {
  const int a = layout.index_of(ConductorRole::PadPlus);
  const int b = layout.index_of(ConductorRole::PadMinus);
  if (a < 0 || b < 0) throw InfeasibleGeometry("layout lacks one of the two pads");
  return ec_from_capacitance(C, a, b, shunt_ff * 1e-15);
}

nlohmann::json mesh_json(const MeshConfig& m) {
  return {{"target_panel_size", m.target_panel_size}, {"edge_band", m.edge_band},
          {"edge_panel_length", m.edge_panel_length}, {"band_growth", m.band_growth},
          {"cut_factor", m.cut_factor},               {"refinement_ratio", m.refinement_ratio},
          {"simplify_fraction", m.simplify_fraction}};
}

MeshConfig mesh_from(const nlohmann::json& j, MeshConfig m, const std::string& where) {
  FieldReader r(j, where);
  r.get("target_panel_size", m.target_panel_size)
      .get("edge_band", m.edge_band)
      .get("edge_panel_length", m.edge_panel_length)
      .get("band_growth", m.band_growth)
      .get("cut_factor", m.cut_factor)
      .get("refinement_ratio", m.refinement_ratio)
      .get("simplify_fraction", m.simplify_fraction);
  r.finish();
  return m;
}

double max_relative_change(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double d = 0.0;
  for (int k = 0; k < 3; ++k)
    if (a[k] > 0.0) d = std::max(d, std::abs(b[k] - a[k]) / a[k]);
  return d;
}

}  // namespace

WireFieldConfig SolverSettings::wire_config(int extra_levels) const {
  WireFieldConfig c = wire;
  c.mesh = wire.mesh.refined(mesh_level + extra_levels);
  c.differential_voltage = differential_voltage;
  return c;
}

void SolverSettings::validate() const {
  mesh.validate();
  wire.mesh.validate();
  if (mesh_level < 0) throw ConfigError("mesh_level must be >= 0");
  if (!(film_thickness > 0.0)) throw ConfigError("film_thickness must be > 0");
  if (!(regions.x0 > 0.0)) throw ConfigError("x0 must be > 0");
  if (std::abs(mesh.region_scale - regions.x0) > 1e-12) throw ConfigError("mesh region scale must equal x0");
  if (!(differential_voltage > 0.0)) throw ConfigError("differential_voltage must be > 0");
  if (junction_shunt_ff < 0.0) throw ConfigError("junction_shunt_ff must be >= 0");
  if (wire.samples < 50) throw ConfigError("wire samples must be >= 50");
}

nlohmann::json to_json(const SolverSettings& s) {
  return {{"mesh", mesh_json(s.mesh)},
          {"mesh_level", s.mesh_level},
          {"x0", s.regions.x0},
          {"film_thickness", s.film_thickness},
          {"far_field_ratio", s.solver.far_field_ratio},
          {"rcond_tolerance", s.solver.rcond_tolerance},
          {"edge", {{"half_extent", s.edge.half_extent},
                    {"finest_spacing", s.edge.finest_spacing},
                    {"growth", s.edge.growth},
                    {"refinement_level", s.edge.refinement_level}}},
          {"wire", {{"mesh", mesh_json(s.wire.mesh)},
                    {"samples", s.wire.samples},
                    {"junction_cutoff", s.wire.junction_cutoff},
                    {"clustering", s.wire.clustering},
                    {"junction_gap", s.wire.model.junction_gap},
                    {"stub_width", s.wire.model.stub_width},
                    {"stub_height", s.wire.model.stub_height}}},
          {"junction_shunt_ff", s.junction_shunt_ff},
          {"differential_voltage", s.differential_voltage},
          {"refinement_check", s.refinement_check}};
}

SolverSettings solver_settings_from_json(const nlohmann::json& j) {
  SolverSettings s;
  FieldReader r(j, "solver");
  if (r.has("mesh")) s.mesh = mesh_from(r.at("mesh"), s.mesh, "solver.mesh");
  r.get("mesh_level", s.mesh_level)
      .get("x0", s.regions.x0)
      .get("film_thickness", s.film_thickness)
      .get("far_field_ratio", s.solver.far_field_ratio)
      .get("rcond_tolerance", s.solver.rcond_tolerance)
      .get("junction_shunt_ff", s.junction_shunt_ff)
      .get("differential_voltage", s.differential_voltage)
      .get("refinement_check", s.refinement_check);
  s.mesh.region_scale = s.regions.x0;
  if (r.has("edge")) {
    FieldReader e(r.at("edge"), "solver.edge");
    e.get("half_extent", s.edge.half_extent)
        .get("finest_spacing", s.edge.finest_spacing)
        .get("growth", s.edge.growth)
        .get("refinement_level", s.edge.refinement_level);
    e.finish();
  }
  if (r.has("wire")) {
    FieldReader w(r.at("wire"), "solver.wire");
    if (w.has("mesh")) s.wire.mesh = mesh_from(w.at("mesh"), s.wire.mesh, "solver.wire.mesh");
    w.get("samples", s.wire.samples)
        .get("junction_cutoff", s.wire.junction_cutoff)
        .get("clustering", s.wire.clustering)
        .get("junction_gap", s.wire.model.junction_gap)
        .get("stub_width", s.wire.model.stub_width)
        .get("stub_height", s.wire.model.stub_height);
    w.finish();
  }
  r.finish();
  s.validate();
  return s;
}

PadSolve solve_pad_interior(const PadLayout& pad, const MaterialStack& stack, const SolverSettings& settings,
                            int extra_levels) {
  const HalfSpaceDielectric diel{stack.eps_substrate};
  ElectrostaticModel model(mesh_conductors(pad.model, settings.pad_mesh(extra_levels)), diel, settings.solver);
  const ChargeSolution s = model.solve(differential_potentials(pad.model, settings.differential_voltage));
  const Eigen::VectorXd e = metal_surface_field(s, diel);
  double sum = 0.0;
  const PanelMesh& mesh = model.mesh();
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    if (classify(mesh.panels[k], settings.regions) != Region::Interior) continue;
    const double ems = ms_layer_field(e(static_cast<Eigen::Index>(k)), stack);
    sum += ems * ems * mesh.panels[k].area();
  }
  PadSolve out;
  out.energy = s.total_energy;
  out.interior_ms = surface_participation(Eigen::VectorXd::Constant(1, std::sqrt(sum)), Eigen::VectorXd::Ones(1),
                                          stack.layer(Interface::MS), s.total_energy);
  out.capacitance = model.capacitance().C;
  out.ec_ghz = charging_energy(pad.model, out.capacitance, settings.junction_shunt_ff);
  out.panels = mesh.size();
  return out;
}

PadEvaluation evaluate_pad(const PadLayout& pad, const MaterialStack& stack, const SolverSettings& settings,
                           const std::array<double, 3>& F, int extra_levels) {
  const HalfSpaceDielectric diel{stack.eps_substrate};
  const MeshConfig cfg = settings.pad_mesh(extra_levels);
  ElectrostaticModel model(mesh_conductors(pad.model, cfg), diel, settings.solver);
  const PanelMesh gap = mesh_gap_region(pad.model, cfg);
  const ChargeSolution s = model.solve(differential_potentials(pad.model, settings.differential_voltage));
  const InterfaceFields fields = interface_fields(model, s, gap);
  PadEvaluation out;
  out.p = pad_participation(model.mesh(), gap, fields, s.total_energy, stack, settings.regions, F);
  out.energy = s.total_energy;
  out.capacitance = model.capacitance().C;
  out.ec_ghz = charging_energy(pad.model, out.capacitance, settings.junction_shunt_ff);
  out.panels = model.mesh().size();
  out.gap_cells = gap.size();
  return out;
}

WireEvaluation evaluate_wire(const WireProfile& wire, const MaterialStack& stack, const SolverSettings& settings,
                             double energy, int extra_levels) {
  WireEvaluation out;
  out.field = centerline_field(wire, HalfSpaceDielectric{stack.eps_substrate}, settings.wire_config(extra_levels));
  const Eigen::Index n = out.field.field.size();
  Eigen::VectorXd ems(n), ema(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    ems(k) = ms_layer_field(out.field.field(k), stack);
    ema(k) = ma_layer_field(out.field.field(k), stack);
  }
  out.p[0] = wire_participation(ems, out.field.half_width, out.field.dy, stack.layer(Interface::MS), energy);
  out.p[1] = wire_participation(ema, out.field.half_width, out.field.dy, stack.layer(Interface::MA), energy);
  return out;
}

std::array<double, 3> edge_scaling(const MaterialStack& stack, const SolverSettings& settings) {
  return solve_edge_problem(settings.film_thickness, settings.regions.x0, stack, settings.edge).F;
}

double reference_pad_energy(const MaterialStack& stack, const SolverSettings& settings) {
  const auto pad = std::get<PadLayout>(make_baseline(BaselineKind::DoublePad));
  return solve_pad_interior(pad, stack, settings).energy;
}

ParticipationReport evaluate_geometry(const GeometryBundle& g, const MaterialStack& stack,
                                      const SolverSettings& settings, double f01_ghz, bool refinement_delta,
                                      std::optional<double> wire_energy) {
  if (!g.pad && !g.wire) throw ConfigError("nothing to evaluate");
  ParticipationReport report;
  report.geometry_id = g.id();
  report.geometry_digest = g.digest();
  report.mesh_level = settings.mesh_level;
  report.f01_ghz = f01_ghz;
  report.has_wire = g.wire.has_value();
  report.F = edge_scaling(stack, settings);

  const auto totals_at = [&](int extra, ParticipationReport& r) {
    double energy = 0.0;
    if (g.pad) {
      const PadEvaluation pe = evaluate_pad(*g.pad, stack, settings, r.F, extra);
      r.pad = pe.p;
      r.ec_ghz = pe.ec_ghz;
      r.energy = pe.energy;
      energy = pe.energy;
    }
    if (g.wire) {
      if (!g.pad) {
        if (!wire_energy) {
          wire_energy = reference_pad_energy(stack, settings);
          spdlog::info("wire normalized by the double-pad baseline energy {:.4e} J", *wire_energy);
        }
        energy = *wire_energy;
        r.energy = energy;
      }
      r.wire = evaluate_wire(*g.wire, stack, settings, energy, extra).p;
    }
    r.finalize(stack);
  };
  totals_at(0, report);
  if (refinement_delta) {
    ParticipationReport finer = report;
    totals_at(1, finer);
    report.refinement_delta = max_relative_change(report.totals(), finer.totals());
  }
  return report;
}

}  // namespace tlsopt
