#include "tlsopt/participation/transmon.hpp"

#include "tlsopt/error.hpp"

#include <spdlog/spdlog.h>

#include <cmath>

namespace tlsopt {
namespace {
constexpr double kPi = 3.14159265358979323846;
}

double ej_from_inductance(double lj_nh) {
  if (!(lj_nh > 0.0)) throw ConfigError("junction inductance must be > 0");
  const double phi = kFluxQuantum / (2.0 * kPi);
  return phi * phi / (lj_nh * 1e-9) / kPlanck * 1e-9;
}

double f01_from_ec(double ec_ghz, double ej_ghz) { return std::sqrt(8.0 * ej_ghz * ec_ghz) - ec_ghz; }

double ec_from_frequency(double f01_ghz, double ej_ghz) {
  if (!(f01_ghz > 0.0)) throw ConfigError("f01 must be > 0");
  if (!(ej_ghz > 0.0)) throw ConfigError("E_J must be > 0");
  const double b = 2.0 * f01_ghz - 8.0 * ej_ghz;
  const double c = f01_ghz * f01_ghz;
  const double disc = b * b - 4.0 * c;
  if (disc < 0.0)
    throw NoSolution("no transmon solution: f01 = " + std::to_string(f01_ghz) + " GHz is too high for E_J = " +
                     std::to_string(ej_ghz) + " GHz");
  // smaller root written as c / larger root to avoid cancellation
  const double big = 0.5 * (-b + std::sqrt(disc));
  return c / big;
}

double transmon_capacitance(const Eigen::MatrixXd& maxwell, int pad1, int pad2, double junction_shunt) {
  const double c12 = -maxwell(pad1, pad2);
  const double c1g = maxwell(pad1, pad1) + maxwell(pad1, pad2);
  const double c2g = maxwell(pad2, pad2) + maxwell(pad2, pad1);
  if (c1g + c2g == 0.0) {
    if (c12 > 0.0) return c12 + junction_shunt;
    throw InfeasibleGeometry("degenerate capacitance matrix: C1g + C2g = 0");
  }
  return c12 + c1g * c2g / (c1g + c2g) + junction_shunt;
}

double ec_from_capacitance(double capacitance) {
  if (!(capacitance > 0.0)) throw InfeasibleGeometry("non-positive transmon capacitance");
  return kElementaryCharge * kElementaryCharge / (2.0 * capacitance) / kPlanck * 1e-9;
}

double ec_from_capacitance(const Eigen::MatrixXd& maxwell, int pad1, int pad2, double junction_shunt) {
  return ec_from_capacitance(transmon_capacitance(maxwell, pad1, pad2, junction_shunt));
}

double ec_penalty(double ec_ghz, double beta, double threshold_ghz) {
  const double excess = std::max(0.0, ec_ghz - threshold_ghz);
  return beta * excess * excess;
}

double t1_from_q(double q, double f01_ghz) {
  if (!(q > 0.0) || !(f01_ghz > 0.0)) throw ConfigError("Q and f01 must be > 0");
  return q / (2.0 * kPi * f01_ghz * 1e9) * 1e6;
}

TransmonParams transmon_params(double lj_nh, double ec_ghz) {
  TransmonParams p;
  p.lj_nh = lj_nh;
  p.ej_ghz = ej_from_inductance(lj_nh);
  p.ec_ghz = ec_ghz;
  p.f01_ghz = f01_from_ec(ec_ghz, p.ej_ghz);
  p.anharmonicity_ghz = -ec_ghz;
  if (!p.transmon_regime()) spdlog::warn("E_J/E_C = {:.1f} is below 20; outside the transmon regime", p.ej_ghz / ec_ghz);
  return p;
}

}  // namespace tlsopt
