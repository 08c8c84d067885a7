#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tlsopt/error.hpp"
#include "tlsopt/participation/participation.hpp"
#include "tlsopt/participation/transmon.hpp"

#include <cmath>
#include <random>

using namespace tlsopt;

namespace {

// Constants typed in by hand so the oracles do not share the library's.
constexpr double kH = 6.62607015e-34;
constexpr double kE = 1.602176634e-19;
constexpr double kEps0 = 8.8541878128e-12;

MaterialLayer layer(double eps_r, double t_nm, double tan_delta = 1e-3) {
  return MaterialLayer{Interface::MS, eps_r, t_nm, tan_delta};
}

}  // namespace

TEST_CASE("Josephson energy from junction inductance") {
  // E_J = (Phi0 / 2 pi)^2 / L_J
  const double phi0 = kH / (2.0 * kE);
  const double ej = std::pow(phi0 / (2.0 * M_PI), 2) / 10e-9 / kH * 1e-9;
  CHECK(ej_from_inductance(10.0) == doctest::Approx(ej).epsilon(1e-12));
  CHECK(ej_from_inductance(10.0) == doctest::Approx(16.35).epsilon(1e-3));
  CHECK(ej_from_inductance(20.0) == doctest::Approx(0.5 * ej).epsilon(1e-12));
}

TEST_CASE("transmon frequency relation") {
  SUBCASE("5 GHz with E_J 16.35 GHz") {
    const double ec = ec_from_frequency(5.0, 16.35);
    CHECK(ec == doctest::Approx(0.2073).epsilon(1e-3));
    CHECK(std::sqrt(8.0 * 16.35 * ec) - ec == doctest::Approx(5.0).epsilon(1e-12));
  }

  SUBCASE("forward then inverse at 0.35 GHz") {
    const double f = f01_from_ec(0.35, 16.35);
    CHECK(f == doctest::Approx(std::sqrt(8.0 * 16.35 * 0.35) - 0.35).epsilon(1e-12));
    CHECK(f == doctest::Approx(6.416).epsilon(1e-3));
    CHECK(ec_from_frequency(f, 16.35) == doctest::Approx(0.35).epsilon(1e-9));
  }

  SUBCASE("round trip over the working range") {
    for (double ec = 0.05; ec <= 0.5 + 1e-12; ec += 0.01) {
      const double back = ec_from_frequency(f01_from_ec(ec, 16.35), 16.35);
      CHECK(std::abs(back - ec) <= 1e-9 * ec);
    }
  }

  SUBCASE("large E_J approaches f01^2 / 8 E_J") {
    const double ej = 1e6;
    CHECK(ec_from_frequency(5.0, ej) == doctest::Approx(25.0 / (8.0 * ej)).epsilon(1e-4));
  }

  SUBCASE("no real root") { CHECK_THROWS_AS(ec_from_frequency(50.0, 1.0), NoSolution); }

  SUBCASE("parameter bundle") {
    const TransmonParams p = transmon_params(10.0, 0.2073);
    CHECK(p.ej_ghz == doctest::Approx(16.35).epsilon(1e-3));
    CHECK(p.f01_ghz == doctest::Approx(5.0).epsilon(1e-3));
    CHECK(p.anharmonicity_ghz == doctest::Approx(-0.2073));
    CHECK(p.transmon_regime());
    CHECK_FALSE(transmon_params(10.0, 2.0).transmon_regime());
  }
}

TEST_CASE("charging energy from capacitance") {
  SUBCASE("series combination of a floating pair") {
    Eigen::Matrix3d C;
    // pads 0 and 1, ground 2; Maxwell form with C12 = 60 fF and C1g = C2g = 40 fF
    C << 100, -60, -40, -60, 100, -40, -40, -40, 80;
    C *= 1e-15;
    CHECK(transmon_capacitance(C, 0, 1) == doctest::Approx(80e-15).epsilon(1e-12));
    const double ec = kE * kE / (2.0 * 80e-15) / kH * 1e-9;
    CHECK(ec_from_capacitance(C, 0, 1) == doctest::Approx(ec).epsilon(1e-12));
    CHECK(ec == doctest::Approx(0.242).epsilon(2e-3));
    CHECK(ec_from_capacitance(2.0 * C, 0, 1) == doctest::Approx(0.5 * ec).epsilon(1e-12));
    CHECK(transmon_capacitance(C, 0, 1, 5e-15) == doctest::Approx(85e-15).epsilon(1e-12));
  }

  SUBCASE("capacitance to infinity counts as ground") {
    // no explicit ground conductor: row sums are the self capacitances
    Eigen::Matrix2d C;
    C << 70, -50, -50, 70;
    C *= 1e-15;
    CHECK(transmon_capacitance(C, 0, 1) == doctest::Approx((50.0 + 20.0 * 20.0 / 40.0) * 1e-15).epsilon(1e-12));
  }
}

TEST_CASE("E_C penalty") {
  CHECK(ec_penalty(0.30, 1.0) == 0.0);
  CHECK(ec_penalty(0.35, 1.0) == 0.0);
  CHECK(ec_penalty(0.40, 1.0) == doctest::Approx(2.5e-3).epsilon(1e-9));
  CHECK(ec_penalty(0.40, 1e-2) == doctest::Approx(2.5e-5).epsilon(1e-9));
  CHECK(ec_penalty(0.50, 1.0, 0.45) == doctest::Approx(2.5e-3).epsilon(1e-9));
}

TEST_CASE("T1 from quality factor") {
  CHECK(t1_from_q(2.24e6, 5.0) == doctest::Approx(71.1).epsilon(0.01));
  CHECK(t1_from_q(2.72e6, 5.0) == doctest::Approx(86.5).epsilon(0.01));
  CHECK(t1_from_q(1e6, 5.0) == doctest::Approx(1e6 / (2.0 * M_PI * 5e9) * 1e6).epsilon(1e-12));
}

TEST_CASE("TLS quality factor") {
  MaterialStack s = material_preset("simplified");
  const std::array<double, 3> p{100e-6, 1e-6, 50e-6};
  CHECK(q_tls(p, s).value == doctest::Approx(1.0 / (151e-6 * 1e-3)).epsilon(1e-12));
  CHECK_FALSE(q_tls(p, s).unbounded);
  for (auto& l : s.layers) l.tan_delta = 0.0;
  CHECK(q_tls(p, s).unbounded);
  s = material_preset("nb-on-si");
  const double loss = 100e-6 * s.layer(Interface::MS).tan_delta + 1e-6 * s.layer(Interface::MA).tan_delta +
                      50e-6 * s.layer(Interface::SA).tan_delta;
  CHECK(q_tls(p, s).value == doctest::Approx(1.0 / loss).epsilon(1e-12));
}

TEST_CASE("surface participation integral") {
  const MaterialLayer l = layer(10.0, 3.0);
  const double w = 2e-14;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Eigen::VectorXd e(40), a(40);
  for (Eigen::Index k = 0; k < 40; ++k) {
    e(k) = 1e5 * u(rng);
    a(k) = 50.0 * u(rng);
  }
  const double p = surface_participation(e, a, l, w);
  double oracle = 0.0;
  for (Eigen::Index k = 0; k < 40; ++k) oracle += e(k) * e(k) * a(k) * 1e-12;
  oracle *= 3e-9 * kEps0 * 10.0 / (2.0 * w);
  CHECK(p == doctest::Approx(oracle).epsilon(1e-12));

  SUBCASE("homogeneous of degree two in the field") {
    CHECK(surface_participation(3.0 * e, a, l, w) == doctest::Approx(9.0 * p).epsilon(1e-12));
  }
  SUBCASE("linear in area, thickness and inverse energy") {
    CHECK(surface_participation(e, 2.0 * a, l, w) == doctest::Approx(2.0 * p).epsilon(1e-12));
    CHECK(surface_participation(e, a, layer(10.0, 6.0), w) == doctest::Approx(2.0 * p).epsilon(1e-12));
    CHECK(surface_participation(e, a, l, 2.0 * w) == doctest::Approx(0.5 * p).epsilon(1e-12));
  }
  SUBCASE("additive over disjoint regions") {
    const double first = surface_participation(e.head(15), a.head(15), l, w);
    const double rest = surface_participation(e.tail(25), a.tail(25), l, w);
    CHECK(first + rest == doctest::Approx(p).epsilon(1e-12));
  }
  SUBCASE("empty region") {
    CHECK(surface_participation(Eigen::VectorXd(0), Eigen::VectorXd(0), l, w) == 0.0);
  }
}

TEST_CASE("layer-internal fields") {
  MaterialStack s = material_preset("simplified");
  CHECK(ms_layer_field(1.0, s) == doctest::Approx(1.17));
  CHECK(ma_layer_field(1.0, s) == doctest::Approx(0.1));
  CHECK(sa_layer_field(3.0, 0.0, s) == doctest::Approx(3.0));
  CHECK(sa_layer_field(3.0, 4.0 / 1.17, s) == doctest::Approx(5.0));
}

TEST_CASE("wire participation integral") {
  const MaterialLayer l = layer(10.0, 3.0);
  const double w = 3e-14, e = 2e5, r = 0.5, len = 80.0;

  SUBCASE("constant profile") {
    // bracket ln(4 r / t) + 5 with r = 0.5 µm and t = 3 nm
    const double bracket = std::log(4.0 * 0.5e-6 / 3e-9) + 5.0;
    CHECK(bracket == doctest::Approx(11.50).epsilon(1e-3));
    const int n = 64;
    const Eigen::VectorXd ev = Eigen::VectorXd::Constant(n, e);
    const Eigen::VectorXd rv = Eigen::VectorXd::Constant(n, r);
    const Eigen::VectorXd dy = Eigen::VectorXd::Constant(n, len / n);
    const double u_one = 3e-9 * kEps0 * 10.0 * e * e * r * 1e-6 * bracket * len * 1e-6;
    CHECK(wire_participation(ev, rv, dy, l, w) == doctest::Approx(2.0 * u_one / w).epsilon(1e-12));
  }

  SUBCASE("additive over slices") {
    Eigen::VectorXd ev(4), rv(4), dy(4);
    ev << 1e5, 2e5, 3e5, 4e5;
    rv << 0.5, 1.0, 2.0, 3.0;
    dy << 1.0, 2.0, 3.0, 4.0;
    const double all = wire_participation(ev, rv, dy, l, w);
    const double a = wire_participation(ev.head(2), rv.head(2), dy.head(2), l, w);
    const double b = wire_participation(ev.tail(2), rv.tail(2), dy.tail(2), l, w);
    CHECK(a + b == doctest::Approx(all).epsilon(1e-12));
    CHECK(wire_participation(2.0 * ev, rv, dy, l, w) == doctest::Approx(4.0 * all).epsilon(1e-12));
  }

  SUBCASE("too narrow for the flat-coax form") {
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
    CHECK_THROWS_AS(wire_participation(one, Eigen::VectorXd::Constant(1, 0.0005), one, l, w), InfeasibleGeometry);
  }
}

TEST_CASE("edge scaling splits the perimeter") {
  const EdgeScaled s = apply_edge_scaling(2e-6, 3.0);
  CHECK(s.diverging == doctest::Approx(6e-6));
  CHECK(s.perimeter == doctest::Approx(8e-6));
}

TEST_CASE("region partition") {
  const RegionPartition r{1.0};
  const auto panel = [](double inner, double outer) {
    Panel p;
    p.band_inner = inner;
    p.band_outer = outer;
    return p;
  };
  CHECK(classify(panel(0.0, 0.25), r) == Region::Diverging);
  CHECK(classify(panel(0.25, 0.5), r) == Region::Diverging);
  CHECK(classify(panel(0.5, 1.0), r) == Region::Accurate);
  CHECK(classify(panel(1.0, 2.0), r) == Region::Interior);
  CHECK(classify(panel(2.0, INFINITY), r) == Region::Interior);
  CHECK_THROWS_AS(classify(panel(0.25, 0.75), r), MeshError);
}

TEST_CASE("material presets") {
  const MaterialStack s = material_preset("simplified");
  for (auto i : kInterfaces) {
    CHECK(s.layer(i).eps_r == 10.0);
    CHECK(s.layer(i).thickness_nm == 3.0);
  }
  CHECK_THROWS_AS(material_preset("gold"), ConfigError);
  const MaterialStack n = material_preset("nb-on-si");
  const MaterialStack back = material_stack_from_json(to_json(n));
  for (auto i : kInterfaces) {
    CHECK(back.layer(i).eps_r == n.layer(i).eps_r);
    CHECK(back.layer(i).tan_delta == n.layer(i).tan_delta);
  }
  CHECK(material_stack_from_json(nlohmann::json("nb-on-si")).preset_name == "nb-on-si");
  nlohmann::json bad = to_json(n);
  bad["layers"]["MS"]["thickness_nm"] = -1.0;
  CHECK_THROWS_AS(material_stack_from_json(bad), ConfigError);
}

TEST_CASE("report JSON round trip recomputes Q") {
  ParticipationReport r;
  r.geometry_id = "double_pad";
  r.material_preset = "simplified";
  r.pad[0] = {40e-6, 10e-6, 30e-6};
  r.pad[1] = {0.3e-6, 0.1e-6, 0.2e-6};
  r.pad[2] = {20e-6, 5e-6, 15e-6};
  r.wire = {100e-6, 1e-6, 0.0};
  r.has_wire = true;
  r.finalize(material_preset("simplified"));
  CHECK(r.q.value == doctest::Approx(1.0 / ((80e-6 + 0.6e-6 + 40e-6 + 101e-6) * 1e-3)).epsilon(1e-9));
  CHECK(r.t1_us == doctest::Approx(t1_from_q(r.q.value, 5.0)).epsilon(1e-12));
  const ParticipationReport back = report_from_json(to_json(r));
  CHECK(back.geometry_id == r.geometry_id);
  for (auto i : kInterfaces) CHECK(back.total(i) == doctest::Approx(r.total(i)).epsilon(1e-12));
  CHECK(back.q.value == doctest::Approx(r.q.value).epsilon(1e-9));
}
