#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tlsopt/field/edge2d.hpp"
#include "tlsopt/field/mom.hpp"
#include "tlsopt/field/wire_field.hpp"
#include "tlsopt/geometry/baseline.hpp"
#include "tlsopt/pipeline/evaluate.hpp"

#include <cmath>

using namespace tlsopt;

namespace {

Polygon rect(double x0, double y0, double x1, double y1) { return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, {}}; }

MeshConfig fine_mesh() {
  MeshConfig m;
  m.target_panel_size = 10.0;
  m.edge_panel_length = 5.0;
  return m;
}

const PadLayout& double_pad_layout() {
  static const PadLayout pad = std::get<PadLayout>(make_baseline(BaselineKind::DoublePad));
  return pad;
}

Eigen::VectorXd pad_potentials(const Layout& layout, double plus, double minus) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.conductors.size()));
  v(layout.index_of(ConductorRole::PadPlus)) = plus;
  v(layout.index_of(ConductorRole::PadMinus)) = minus;
  return v;
}

}  // namespace

TEST_CASE("isolated square plate matches the reference capacitance") {
  // C = 0.36738 * 4 pi eps0 a for a thin square plate in vacuum
  const double a = 100.0;
  const PanelMesh mesh = mesh_conductors(std::vector<PolygonSet>{{rect(0, 0, a, a)}}, fine_mesh());
  const double c = capacitance_matrix(mesh, {1.0}).C(0, 0);
  CHECK(c / (4.0 * M_PI * kEpsilon0 * a * 1e-6) == doctest::Approx(0.36738).epsilon(0.005));
}

TEST_CASE("disk capacitance is 8 eps0 R eps_eff") {
  const double r = 50.0, eps = 11.7;
  Ring ring;
  const int n = 128;
  for (int i = 0; i < n; ++i) ring.emplace_back(r * std::cos(2 * M_PI * i / n), r * std::sin(2 * M_PI * i / n));
  const PanelMesh mesh = mesh_conductors(std::vector<PolygonSet>{{Polygon{ring, {}}}}, fine_mesh());
  const double c = capacitance_matrix(mesh, {eps}).C(0, 0);
  CHECK(c == doctest::Approx(8.0 * kEpsilon0 * r * 1e-6 * 0.5 * (1.0 + eps)).epsilon(0.005));
}

TEST_CASE("slot field between long coplanar strips") {
  // Strips a < |x| < b at +-V/2: E(x) = V b / (2 K(a/b) sqrt((a^2 - x^2)(b^2 - x^2)))
  const double a = 5.0, b = 105.0, len = 1000.0, v = 1.0;
  MeshConfig m;
  m.target_panel_size = 20.0;
  m.edge_panel_length = 10.0;
  const PanelMesh mesh =
      mesh_conductors(std::vector<PolygonSet>{{rect(a, -len / 2, b, len / 2)}, {rect(-b, -len / 2, -a, len / 2)}}, m);
  const ElectrostaticModel model(mesh, {11.7});
  const ChargeSolution s = model.solve(Eigen::Vector2d(0.5 * v, -0.5 * v));
  const auto exact = [&](double x) {
    return v * b / (2.0 * std::comp_ellint_1(a / b) * std::sqrt((a * a - x * x) * (b * b - x * x))) * 1e6;
  };
  const Eigen::Matrix2Xd e = model.inplane_field(s, {Point2d(0, 0), Point2d(2, 0), Point2d(-3, 0)});
  CHECK(e.col(0).norm() == doctest::Approx(exact(0.0)).epsilon(0.02));
  CHECK(e.col(1).norm() == doctest::Approx(exact(2.0)).epsilon(0.02));
  CHECK(e.col(2).norm() == doctest::Approx(exact(-3.0)).epsilon(0.02));
  // field points from + to -
  CHECK(e(0, 0) < 0.0);
  CHECK(std::abs(e(1, 0)) < 1e-3 * e.col(0).norm());
}

TEST_CASE("double-pad solve properties") {
  const Layout& layout = double_pad_layout().model;
  SolverSettings settings;
  const ElectrostaticModel model(mesh_conductors(layout, settings.pad_mesh()), {11.7});
  const CapacitanceMatrix cap = model.capacitance();
  const Eigen::MatrixXd& C = cap.C;

  SUBCASE("reciprocity") { CHECK(cap.asymmetry < 0.01); }

  SUBCASE("Maxwell matrix signs") {
    for (Eigen::Index i = 0; i < C.rows(); ++i) {
      CHECK(C(i, i) > 0.0);
      for (Eigen::Index j = 0; j < C.cols(); ++j)
        if (i != j) CHECK(C(i, j) < 0.0);
      // diagonal dominance: the rest is the capacitance to infinity
      CHECK(C.row(i).sum() > 0.0);
    }
  }

  SUBCASE("superposition") {
    const Eigen::VectorXd v1 = pad_potentials(layout, 0.7, -0.2);
    const Eigen::VectorXd v2 = pad_potentials(layout, -0.3, 1.1);
    const ChargeSolution a = model.solve(v1), b = model.solve(v2), ab = model.solve(v1 + v2);
    CHECK((ab.sigma - a.sigma - b.sigma).norm() <= 1e-9 * ab.sigma.norm());
    const double pa = model.potential_at(a, Point2d(0, 0)), pb = model.potential_at(b, Point2d(0, 0));
    CHECK(model.potential_at(ab, Point2d(0, 0)) == doctest::Approx(pa + pb).epsilon(1e-9));
  }

  SUBCASE("stored energy is half v^T C v") {
    const Eigen::VectorXd v = pad_potentials(layout, 0.5, -0.5);
    const ChargeSolution s = model.solve(v);
    CHECK(s.total_energy == doctest::Approx(0.5 * v.dot(C * v)).epsilon(1e-6));
    // mirror-symmetric drive: no net charge up to mesh asymmetry
    CHECK(std::abs(s.conductor_charge.sum()) < 1e-3 * s.conductor_charge.cwiseAbs().sum());
  }

  SUBCASE("charges are antisymmetric under pad sign swap") {
    const ChargeSolution p = model.solve(pad_potentials(layout, 0.5, -0.5));
    const ChargeSolution n = model.solve(pad_potentials(layout, -0.5, 0.5));
    CHECK((p.sigma + n.sigma).norm() <= 1e-9 * p.sigma.norm());
  }
}

TEST_CASE("capacitance scales linearly with layout size") {
  const Layout& layout = double_pad_layout().model;
  MeshConfig m;
  const CapacitanceMatrix c1 = capacitance_matrix(mesh_conductors(layout, m), {11.7});
  MeshConfig m2 = m;
  m2.target_panel_size *= 2.0;
  m2.edge_band *= 2.0;
  m2.region_scale *= 2.0;
  m2.edge_panel_length *= 2.0;
  const CapacitanceMatrix c2 = capacitance_matrix(mesh_conductors(scaled(layout, 2.0), m2), {11.7});
  const Eigen::MatrixXd diff = c2.C - 2.0 * c1.C;
  CHECK(diff.cwiseAbs().maxCoeff() < 0.01 * c1.C.cwiseAbs().maxCoeff() * 2.0);
}

TEST_CASE("double-pad refinement converges") {
  const PadLayout& pad = double_pad_layout();
  const MaterialStack stack = material_preset("simplified");
  SolverSettings settings;
  settings.mesh_level = 0;
  const PadSolve l1 = solve_pad_interior(pad, stack, settings, 1);
  const PadSolve l2 = solve_pad_interior(pad, stack, settings, 2);
  CHECK(l2.panels > l1.panels);
  CHECK(std::abs(l2.ec_ghz - l1.ec_ghz) / l2.ec_ghz < 0.01);
  CHECK(std::abs(l2.interior_ms - l1.interior_ms) / l2.interior_ms < 0.01);
  CHECK(std::abs(l2.energy - l1.energy) / l2.energy < 0.01);
}

TEST_CASE("panel mesh JSON round trip") {
  const PanelMesh mesh = mesh_conductors(std::vector<PolygonSet>{{rect(0, 0, 50, 30)}, {rect(60, 0, 90, 30)}}, {});
  const PanelMesh back = mesh_from_json(to_json(mesh));
  REQUIRE(back.size() == mesh.size());
  CHECK(back.conductor_names == mesh.conductor_names);
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    CHECK(back.panels[k].conductor == mesh.panels[k].conductor);
    CHECK(back.panels[k].area() == doctest::Approx(mesh.panels[k].area()).epsilon(1e-12));
    CHECK(back.panels[k].band_inner == mesh.panels[k].band_inner);
  }
}

TEST_CASE("edge problem") {
  const MaterialStack stack = material_preset("simplified");
  const EdgeProblemSolution s = solve_edge_problem(0.1, 1.0, stack);

  SUBCASE("diverging band carries more than the accurate band") {
    for (auto i : kInterfaces) {
      CHECK(s.scaling(i) > 1.0);
      CHECK(std::isfinite(s.scaling(i)));
    }
  }

  SUBCASE("mirror image gives the same scaling") {
    EdgeProblemConfig cfg;
    cfg.mirrored = true;
    const EdgeProblemSolution m = solve_edge_problem(0.1, 1.0, stack, cfg);
    for (auto i : kInterfaces) CHECK(m.scaling(i) == doctest::Approx(s.scaling(i)).epsilon(1e-9));
  }

  SUBCASE("scaling is stable under grid refinement") {
    EdgeProblemConfig cfg;
    cfg.refinement_level = 1;
    const EdgeProblemSolution r = solve_edge_problem(0.1, 1.0, stack, cfg);
    CHECK(r.unknowns > s.unknowns);
    for (auto i : kInterfaces) CHECK(r.scaling(i) == doctest::Approx(s.scaling(i)).epsilon(0.02));
  }

  SUBCASE("thicker films concentrate less charge at the corner") {
    const EdgeProblemSolution thick = solve_edge_problem(0.3, 1.0, stack);
    CHECK(thick.scaling(Interface::MS) < s.scaling(Interface::MS));
  }
}

TEST_CASE("wire centreline field") {
  const HalfSpaceDielectric diel{11.7};
  const WireProfile straight = straight_wire(1.0, 81.0);
  const CenterlineField f = centerline_field(straight, diel);

  SUBCASE("layout of the samples") {
    CHECK(f.y.size() == 60);
    CHECK(f.dy.sum() == doctest::Approx(81.0 - 0.5).epsilon(1e-9));
    CHECK((f.field.array() > 0.0).all());
    CHECK((f.half_width.array() - 0.5).abs().maxCoeff() < 1e-12);
  }

  SUBCASE("field decays away from the junction") {
    CHECK(f.field(0) > f.field(f.field.size() / 2));
    CHECK(f.field(f.field.size() / 2) > f.field(f.field.size() - 1));
  }

  SUBCASE("field is linear in the drive voltage") {
    WireFieldConfig cfg;
    cfg.differential_voltage = 2.0;
    const CenterlineField g = centerline_field(straight, diel, cfg);
    CHECK((g.field - 2.0 * f.field).norm() <= 1e-9 * g.field.norm());
  }

  SUBCASE("wider wire lowers the centreline field") {
    const CenterlineField wide = centerline_field(straight_wire(4.0, 81.0), diel);
    CHECK(wide.field(wide.field.size() / 2) < f.field(f.field.size() / 2));
  }
}
