#pragma once

#include "tlsopt/error.hpp"
#include "tlsopt/geometry/types.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace tlsopt {

/// Clamped B-spline curve in the plane, evaluated with de Boor's algorithm.
///
/// The public parameter t always runs over [0, 1]; it is mapped linearly onto
/// the knot domain [u_p, u_n]. The knot vector must be clamped (first and last
/// knot repeated degree + 1 times) so the curve interpolates both end control
/// points.
template <typename Scalar>
class BSplineCurve {
 public:
  using Point = Point2<Scalar>;

  BSplineCurve(std::vector<Point> control_points, int degree, std::vector<Scalar> knots)
      : control_points_(std::move(control_points)), degree_(degree), knots_(std::move(knots)) {
    validate();
  }

  /// Clamped curve with uniformly spaced interior knots on [0, 1].
  static BSplineCurve clamped_uniform(std::vector<Point> control_points, int degree) {
    const int n = static_cast<int>(control_points.size());
    if (degree < 1 || n < degree + 1)
      throw InvalidCurve("need at least degree + 1 control points (degree " + std::to_string(degree) +
                         ", got " + std::to_string(n) + ")");
    std::vector<Scalar> knots(static_cast<std::size_t>(n + degree + 1));
    const int spans = n - degree;
    for (int i = 0; i < n + degree + 1; ++i) {
      if (i <= degree)
        knots[i] = Scalar(0);
      else if (i >= n)
        knots[i] = Scalar(1);
      else
        knots[i] = Scalar(i - degree) / Scalar(spans);
    }
    return BSplineCurve(std::move(control_points), degree, std::move(knots));
  }

  /// Parameter values at which the curve reproduces linear functions:
  /// sum_i greville[i] * N_i(t) == t.
  static std::vector<Scalar> greville_abscissae(int n_control, int degree) {
    const auto probe = clamped_uniform(std::vector<Point>(n_control, Point::Zero()), degree);
    std::vector<Scalar> xi(n_control);
    for (int i = 0; i < n_control; ++i) {
      Scalar s(0);
      for (int j = 1; j <= degree; ++j) s += probe.knots_[i + j];
      xi[i] = s / Scalar(degree);
    }
    return xi;
  }

  Point evaluate(Scalar t) const {
    const Scalar lo = knots_[degree_];
    const Scalar hi = knots_[control_points_.size()];
    const Scalar u = lo + std::clamp(t, Scalar(0), Scalar(1)) * (hi - lo);
    const int k = find_span(u);

    std::vector<Point> d(static_cast<std::size_t>(degree_ + 1));
    for (int j = 0; j <= degree_; ++j) d[j] = control_points_[j + k - degree_];
    for (int r = 1; r <= degree_; ++r) {
      for (int j = degree_; j >= r; --j) {
        const int i = j + k - degree_;
        const Scalar denom = knots_[i + degree_ - r + 1] - knots_[i];
        const Scalar alpha = denom > Scalar(0) ? (u - knots_[i]) / denom : Scalar(0);
        d[j] = (Scalar(1) - alpha) * d[j - 1] + alpha * d[j];
      }
    }
    return d[degree_];
  }

  /// Adaptive polyline: an interval is split until its midpoint lies within
  /// `chord_tolerance` of the chord. Endpoints included.
  std::vector<Point> polygonize(Scalar chord_tolerance, int min_segments_per_span = 4) const {
    const int spans = static_cast<int>(control_points_.size()) - degree_;
    const int initial = std::max(1, spans * min_segments_per_span);
    std::vector<Point> out;
    out.push_back(evaluate(Scalar(0)));
    for (int i = 0; i < initial; ++i) {
      const Scalar a = Scalar(i) / Scalar(initial);
      const Scalar b = Scalar(i + 1) / Scalar(initial);
      refine(a, evaluate(a), b, evaluate(b), chord_tolerance, 0, out);
    }
    return out;
  }

  const std::vector<Point>& control_points() const { return control_points_; }
  const std::vector<Scalar>& knots() const { return knots_; }
  int degree() const { return degree_; }

 private:
  void validate() const {
    const std::size_t n = control_points_.size();
    if (degree_ < 1) throw InvalidCurve("spline degree must be >= 1");
    if (n < static_cast<std::size_t>(degree_ + 1)) throw InvalidCurve("too few control points for degree");
    if (knots_.size() != n + degree_ + 1)
      throw InvalidCurve("knot count " + std::to_string(knots_.size()) + " != control points + degree + 1 (" +
                         std::to_string(n + degree_ + 1) + ")");
    for (std::size_t i = 1; i < knots_.size(); ++i)
      if (!(knots_[i] >= knots_[i - 1])) throw InvalidCurve("knot vector is not nondecreasing");
    for (int i = 1; i <= degree_; ++i) {
      if (knots_[i] != knots_[0] || knots_[knots_.size() - 1 - i] != knots_.back())
        throw InvalidCurve("knot vector is not clamped");
    }
    if (!(knots_.back() > knots_.front())) throw InvalidCurve("knot vector has an empty domain");
    for (const auto& p : control_points_)
      if (!p.allFinite()) throw InvalidCurve("non-finite control point");
  }

  int find_span(Scalar u) const {
    const int n = static_cast<int>(control_points_.size());
    if (u >= knots_[n]) {
      int k = n - 1;
      while (k > degree_ && knots_[k] == knots_[k + 1]) --k;
      return k;
    }
    int k = degree_;
    while (k < n - 1 && u >= knots_[k + 1]) ++k;
    return k;
  }

  void refine(Scalar a, const Point& pa, Scalar b, const Point& pb, Scalar tol, int depth,
              std::vector<Point>& out) const {
    const Scalar m = Scalar(0.5) * (a + b);
    const Point pm = evaluate(m);
    const Point chord = pb - pa;
    const Scalar len = chord.norm();
    const Scalar dev = len > Scalar(0) ? std::abs(cross2<Scalar>(chord, Point(pm - pa))) / len : (pm - pa).norm();
    if (dev > tol && depth < 24) {
      refine(a, pa, m, pm, tol, depth + 1, out);
      refine(m, pm, b, pb, tol, depth + 1, out);
    } else {
      out.push_back(pb);
    }
  }

  std::vector<Point> control_points_;
  int degree_;
  std::vector<Scalar> knots_;
};

}  // namespace tlsopt
