#include "tlsopt/field/edge2d.hpp"

#include "tlsopt/error.hpp"
#include "tlsopt/field/mom.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <vector>

namespace tlsopt {
namespace {

// Offsets 0..length whose spacing starts at h0 and grows by g.
std::vector<double> graded(double length, double h0, double g) {
  std::vector<double> s{0.0};
  double h = h0;
  while (s.back() + h < length) {
    s.push_back(s.back() + h);
    h *= g;
  }
  if (length - s.back() < 0.5 * h / g && s.size() > 1)
    s.back() = length;
  else
    s.push_back(length);
  return s;
}

// Nodes on [a, b], refined toward the ends flagged.
void append_interval(std::vector<double>& axis, double a, double b, bool fine_a, bool fine_b, double h0, double g) {
  std::vector<double> pts;
  const double len = b - a;
  if (fine_a && fine_b) {
    const std::vector<double> half = graded(0.5 * len, h0, g);
    for (double s : half) pts.push_back(a + s);
    for (auto it = half.rbegin() + 1; it != half.rend(); ++it) pts.push_back(b - *it);
  } else if (fine_a) {
    for (double s : graded(len, h0, g)) pts.push_back(a + s);
  } else {
    const std::vector<double> r = graded(len, h0, g);
    for (auto it = r.rbegin(); it != r.rend(); ++it) pts.push_back(b - *it);
  }
  for (double p : pts)
    if (axis.empty() || p > axis.back() + 1e-15) axis.push_back(p);
}

std::size_t index_of(const std::vector<double>& axis, double v) {
  const auto it = std::min_element(axis.begin(), axis.end(),
                                   [&](double a, double b) { return std::abs(a - v) < std::abs(b - v); });
  return static_cast<std::size_t>(it - axis.begin());
}

// Trapezoid integral of samples (d ascending) over [lo, hi] with linear
// interpolation at the ends.
double band_integral(const std::vector<std::pair<double, double>>& s, double lo, double hi) {
  const auto value = [&](double d) {
    auto it = std::lower_bound(s.begin(), s.end(), d, [](const auto& p, double v) { return p.first < v; });
    if (it == s.begin()) return it->second;
    if (it == s.end()) return s.back().second;
    const auto& b = *it;
    const auto& a = *(it - 1);
    return a.second + (b.second - a.second) * (d - a.first) / (b.first - a.first);
  };
  double acc = 0.0;
  double prev_d = lo;
  double prev_v = value(lo);
  for (const auto& [d, v] : s) {
    if (d <= lo) continue;
    if (d >= hi) break;
    acc += 0.5 * (prev_v + v) * (d - prev_d);
    prev_d = d;
    prev_v = v;
  }
  acc += 0.5 * (prev_v + value(hi)) * (hi - prev_d);
  return acc;
}

}  // namespace

EdgeProblemSolution solve_edge_problem(double film_thickness, double x0, const MaterialStack& layers,
                                       const EdgeProblemConfig& config) {
  layers.validate();
  if (!(film_thickness > 0.0)) throw ConfigError("film thickness must be > 0");
  if (!(x0 > 0.0)) throw ConfigError("x0 must be > 0");
  const double scale = std::pow(0.5, config.refinement_level);
  const double h0 = config.finest_spacing * scale;
  const double g = 1.0 + (config.growth - 1.0) * scale;
  double cutoff = x0;
  for (const auto& l : layers.layers) cutoff = std::min(cutoff, l.thickness_um());
  if (h0 > cutoff)
    throw ConfigError("edge grid spacing " + std::to_string(h0) + " um does not resolve the inner cutoff " +
                      std::to_string(cutoff) + " um");
  if (0.5 * x0 <= cutoff) throw ConfigError("x0 / 2 must exceed every layer thickness");
  const double ext = config.half_extent;
  if (ext < 10.0 * x0) throw ConfigError("edge problem box must extend at least 10 x0");
  const double t = film_thickness;

  std::vector<double> xs, zs;
  append_interval(xs, -ext, 0.0, false, true, h0, g);
  append_interval(xs, 0.0, ext, true, false, h0, g);
  append_interval(zs, -ext, 0.0, false, true, h0, g);
  append_interval(zs, 0.0, t, true, true, h0, g);
  append_interval(zs, t, ext, true, false, h0, g);

  const double side = config.mirrored ? -1.0 : 1.0;  // film occupies side * x >= 0
  const std::size_t nx = xs.size(), nz = zs.size();
  const std::size_t j0 = index_of(zs, 0.0), jt = index_of(zs, t);
  const auto node = [&](std::size_t i, std::size_t j) { return j * nx + i; };
  const auto eps_cell = [&](std::size_t, std::size_t j) { return 0.5 * (zs[j] + zs[j + 1]) < 0.0 ? layers.eps_substrate : 1.0; };

  std::vector<int> fixed(nx * nz, 0);
  std::vector<double> phi(nx * nz, 0.0);
  const std::size_t neumann_i = config.mirrored ? 0 : nx - 1;
  for (std::size_t j = 0; j < nz; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t n = node(i, j);
      if (side * xs[i] >= -1e-15 && j >= j0 && j <= jt) {
        fixed[n] = 1;
        phi[n] = 1.0;
      } else if (j == 0 || j == nz - 1 || ((i == 0 || i == nx - 1) && i != neumann_i)) {
        fixed[n] = 1;
      }
    }
  std::vector<long> unknown(nx * nz, -1);
  long nu = 0;
  for (std::size_t n = 0; n < nx * nz; ++n)
    if (!fixed[n]) unknown[n] = nu++;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nu) * 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu);
  const auto couple = [&](std::size_t a, std::size_t b, double c) {
    const long ua = unknown[a], ub = unknown[b];
    if (ua >= 0) {
      trip.emplace_back(ua, ua, c);
      if (ub >= 0)
        trip.emplace_back(ua, ub, -c);
      else
        rhs(ua) += c * phi[b];
    }
    if (ub >= 0) {
      trip.emplace_back(ub, ub, c);
      if (ua >= 0)
        trip.emplace_back(ub, ua, -c);
      else
        rhs(ub) += c * phi[a];
    }
  };
  for (std::size_t j = 0; j < nz; ++j)
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      double w = 0.0;
      if (j > 0) w += eps_cell(i, j - 1) * 0.5 * (zs[j] - zs[j - 1]);
      if (j + 1 < nz) w += eps_cell(i, j) * 0.5 * (zs[j + 1] - zs[j]);
      couple(node(i, j), node(i + 1, j), w / (xs[i + 1] - xs[i]));
    }
  for (std::size_t j = 0; j + 1 < nz; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      double w = 0.0;
      if (i > 0) w += eps_cell(i - 1, j) * 0.5 * (xs[i] - xs[i - 1]);
      if (i + 1 < nx) w += eps_cell(i, j) * 0.5 * (xs[i + 1] - xs[i]);
      couple(node(i, j), node(i, j + 1), w / (zs[j + 1] - zs[j]));
    }
  Eigen::SparseMatrix<double> a(nu, nu);
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw SolverError("edge problem factorization failed");
  const Eigen::VectorXd u = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success || !u.allFinite()) throw SolverError("edge problem solve failed");
  for (std::size_t n = 0; n < nx * nz; ++n)
    if (unknown[n] >= 0) phi[n] = u(unknown[n]);

  // squared layer-internal fields (V/m)^2 against lateral distance (µm)
  std::array<std::vector<std::pair<double, double>>, 3> samples;
  const double e_ms = layers.eps_substrate / layers.layer(Interface::MS).eps_r;
  const double e_ma = 1.0 / layers.layer(Interface::MA).eps_r;
  const double e_sa = layers.eps_substrate / layers.layer(Interface::SA).eps_r;
  const double dz_below = (zs[j0] - zs[j0 - 1]) * 1e-6;
  const double dz_above = (zs[jt + 1] - zs[jt]) * 1e-6;
  for (std::size_t i = 1; i + 1 < nx; ++i) {
    const double d = side * xs[i];
    if (d >= 0.0) {
      const double ems = e_ms * (1.0 - phi[node(i, j0 - 1)]) / dz_below;
      const double ema = e_ma * (1.0 - phi[node(i, jt + 1)]) / dz_above;
      samples[0].emplace_back(d, ems * ems);
      samples[1].emplace_back(d, ema * ema);
    } else {
      const double ex = (phi[node(i + 1, j0)] - phi[node(i - 1, j0)]) / ((xs[i + 1] - xs[i - 1]) * 1e-6);
      const double ez = e_sa * (phi[node(i, j0)] - phi[node(i, j0 - 1)]) / dz_below;
      samples[2].emplace_back(-d, ex * ex + ez * ez);
    }
  }

  EdgeProblemSolution out;
  out.film_thickness = t;
  out.x0 = x0;
  out.unknowns = static_cast<std::size_t>(nu);
  for (auto iface : kInterfaces) {
    const int k = static_cast<int>(iface);
    auto& s = samples[k];
    std::sort(s.begin(), s.end());
    const MaterialLayer& l = layers.layer(iface);
    const double pre = 0.5 * l.thickness_um() * 1e-6 * kEpsilon0 * l.eps_r * 1e-6;  // dx in µm -> m
    out.energy_diverging[k] = pre * band_integral(s, l.thickness_um(), 0.5 * x0);
    out.energy_accurate[k] = pre * band_integral(s, 0.5 * x0, x0);
    out.F[k] = out.energy_diverging[k] / out.energy_accurate[k];
    if (!(out.F[k] > 0.0) || !std::isfinite(out.F[k]))
      throw SolverError("edge problem produced a non-positive scaling factor for " + to_string(iface));
  }
  return out;
}

}  // namespace tlsopt
