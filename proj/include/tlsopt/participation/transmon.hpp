#pragma once

#include <Eigen/Core>

namespace tlsopt {

inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kFluxQuantum = kPlanck / (2.0 * kElementaryCharge);

/// Josephson energy E_J/h in GHz for a junction inductance in nH.
double ej_from_inductance(double lj_nh);

/// Transmon frequency hf01 = sqrt(8 E_J E_C) - E_C (all GHz).
double f01_from_ec(double ec_ghz, double ej_ghz);

/// Inverse of f01_from_ec: the smaller root of
/// E_C^2 + (2 f01 - 8 E_J) E_C + f01^2 = 0. Throws NoSolution when the
/// discriminant is negative.
double ec_from_frequency(double f01_ghz, double ej_ghz);

/// Effective shunt capacitance (F) of a floating transmon from a Maxwell
/// capacitance matrix: C12 + C1g C2g / (C1g + C2g) + shunt, where "g" lumps
/// every conductor other than the two pads (ground frame and infinity).
double transmon_capacitance(const Eigen::MatrixXd& maxwell, int pad1, int pad2, double junction_shunt = 0.0);

/// E_C/h in GHz for a capacitance in F.
double ec_from_capacitance(double capacitance);
double ec_from_capacitance(const Eigen::MatrixXd& maxwell, int pad1, int pad2, double junction_shunt = 0.0);

/// beta * max(0, E_C - threshold)^2 with E_C in GHz.
double ec_penalty(double ec_ghz, double beta, double threshold_ghz = 0.35);

/// T1 = Q / (2 pi f01), in µs for f01 in GHz.
double t1_from_q(double q, double f01_ghz);

struct TransmonParams {
  double ej_ghz = 0.0;
  double ec_ghz = 0.0;
  double lj_nh = 0.0;
  double f01_ghz = 0.0;
  double anharmonicity_ghz = 0.0;  // approximately -E_C

  bool transmon_regime() const { return ej_ghz / ec_ghz >= 20.0; }
};

/// Parameters for a junction inductance and a charging energy.
TransmonParams transmon_params(double lj_nh, double ec_ghz);

}  // namespace tlsopt
