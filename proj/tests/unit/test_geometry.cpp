#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "tlsopt/geometry/baseline.hpp"
#include "tlsopt/geometry/bspline.hpp"
#include "tlsopt/geometry/pad.hpp"
#include "tlsopt/geometry/polygon_ops.hpp"
#include "tlsopt/geometry/wire.hpp"

#include <Eigen/Geometry>

#include <random>

using namespace tlsopt;

namespace {

double hull_cross(const Point2d& o, const Point2d& a, const Point2d& b) { return cross2<double>(a - o, b - o); }

// Andrew monotone chain; counter-clockwise, no collinear points.
std::vector<Point2d> convex_hull(std::vector<Point2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2d& a, const Point2d& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  std::vector<Point2d> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && hull_cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && hull_cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

PadDesignVector smooth_pad() {
  PadDesignVector v;
  v << 250, 60, 380, 200, 300, 380, 40, 390;
  return v;
}

}  // namespace

TEST_CASE("degree-1 spline interpolates linearly") {
  auto c = BSplineCurve<double>::clamped_uniform({Point2d(0, 0), Point2d(2, 0)}, 1);
  const Point2d p = c.evaluate(0.5);
  CHECK(p.x() == doctest::Approx(1.0));
  CHECK(p.y() == doctest::Approx(0.0));
}

TEST_CASE("clamped endpoints are interpolated") {
  std::vector<Point2d> cps{Point2d(0, 0), Point2d(1, 2), Point2d(2, 0), Point2d(3, 2), Point2d(4, 0)};
  auto c = BSplineCurve<double>::clamped_uniform(cps, 3);
  CHECK((c.evaluate(0.0) - cps.front()).norm() == 0.0);
  CHECK((c.evaluate(1.0) - cps.back()).norm() < 1e-15);
}

TEST_CASE("cubic de Boor evaluation matches Cox-de Boor recursion") {
  std::vector<Point2d> cps{Point2d(0, 0), Point2d(1, 2), Point2d(2, 0), Point2d(3, 2), Point2d(4, 0)};
  auto c = BSplineCurve<double>::clamped_uniform(cps, 3);
  const Point2d expected = oracle::spline_point(cps, 3, 0.5);
  // frozen from the recursion: basis (0, 1/4, 1/2, 1/4, 0) at the middle knot
  CHECK(expected.x() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(expected.y() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((c.evaluate(0.5) - expected).norm() < 1e-14);
  for (int i = 0; i <= 50; ++i) {
    const double t = i / 50.0;
    CHECK((c.evaluate(t) - oracle::spline_point(cps, 3, t)).norm() < 1e-13);
  }
}

TEST_CASE("inconsistent knot vectors are rejected") {
  std::vector<Point2d> cps{Point2d(0, 0), Point2d(1, 1), Point2d(2, 0), Point2d(3, 1)};
  CHECK_THROWS_AS(BSplineCurve<double>(cps, 3, {0, 0, 0, 0, 1, 1, 1}), InvalidCurve);
  CHECK_THROWS_AS(BSplineCurve<double>(cps, 3, {0, 0, 0, 0.5, 1, 1, 1, 1}), InvalidCurve);
  CHECK_THROWS_AS(BSplineCurve<double>(cps, 3, {0, 0, 0, 0, 1, 0.5, 1, 1}), InvalidCurve);
  CHECK_THROWS_AS(BSplineCurve<double>::clamped_uniform({Point2d(0, 0)}, 3), InvalidCurve);
}

TEST_CASE("spline evaluation is affine invariant") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point2d> cps;
    for (int i = 0; i < 6; ++i) cps.emplace_back(u(rng), u(rng));
    Eigen::Matrix2d a;
    a << u(rng), u(rng), u(rng), u(rng);
    const Point2d b(u(rng), u(rng));
    std::vector<Point2d> moved;
    for (const auto& p : cps) moved.push_back(a * p + b);
    auto c = BSplineCurve<double>::clamped_uniform(cps, 3);
    auto cm = BSplineCurve<double>::clamped_uniform(moved, 3);
    for (int i = 0; i <= 20; ++i) {
      const double t = i / 20.0;
      const Point2d lhs = cm.evaluate(t);
      const Point2d rhs = a * c.evaluate(t) + b;
      CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
    }
  }
}

TEST_CASE("evaluated points lie in the control polygon's convex hull") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point2d> cps;
    for (int i = 0; i < 5; ++i) cps.emplace_back(u(rng), u(rng));
    const auto hull = convex_hull(cps);
    auto c = BSplineCurve<double>::clamped_uniform(cps, 3);
    for (int i = 0; i <= 40; ++i) {
      const Point2d p = c.evaluate(i / 40.0);
      for (std::size_t k = 0; k < hull.size(); ++k)
        CHECK(hull_cross(hull[k], hull[(k + 1) % hull.size()], p) >= -1e-9);
    }
  }
}

TEST_CASE("collinear control points on a rectangle edge give a rectangular pad") {
  PadConfig cfg;
  cfg.degree = 1;
  PadDesignVector v;
  v << 300, 50, 300, 200, 300, 350, 50, 350;
  const PadLayout pad = build_pad_outline(v, cfg);
  CHECK(area(pad.outline) == doctest::Approx(600.0 * 300.0).epsilon(1e-9));
  const Box2 b = bounding_box(pad.outline.outer);
  CHECK(b.min.x() == doctest::Approx(-300));
  CHECK(b.max.y() == doctest::Approx(350));
}

TEST_CASE("smooth pad outline is simple, symmetric and within the footprint") {
  const PadLayout pad = build_pad_outline(smooth_pad());
  CHECK(is_simple_polygon(pad.outline));
  CHECK(pad.wire_length == doctest::Approx(40));
  const Point2d size = pad.pads_bounding_box().size();
  CHECK(size.x() <= 800.0);
  CHECK(size.y() <= 800.0);
  // reflect every vertex across the axis; it must land on the outline
  for (const auto& q : pad.outline.outer) CHECK(distance_to_boundary(pad.outline, Point2d(-q.x(), q.y())) < 1e-9);
  // chord tolerance: spline samples are within 0.5 um of the polygon
  const auto cps = std::vector<Point2d>{Point2d(0, 40), Point2d(250, 60), Point2d(380, 200), Point2d(300, 380),
                                        Point2d(0, 390)};
  for (int i = 0; i <= 200; ++i)
    CHECK(distance_to_boundary(pad.outline, oracle::spline_point(cps, 3, i / 200.0)) <= 0.5 + 1e-9);
  // ground frame hole sits exactly one gap outside the pads
  const auto& ground = pad.model.conductors[2];
  CHECK(polygon_distance(pad.model.conductors[0].shape, ground.shape) == doctest::Approx(100.0));
}

TEST_CASE("mirrored design vector reproduces the outline") {
  // Swapping which side is free (reflect P1..P3 to negative x and back through
  // the construction) must give the identical polygon.
  const PadLayout a = build_pad_outline(smooth_pad());
  Polygon reflected = transformed(a.outline, [](const Point2d& p) { return Point2d(-p.x(), p.y()); });
  orient(reflected);
  CHECK(std::abs(area(reflected) - area(a.outline)) < 1e-9);
  for (const auto& q : reflected.outer) CHECK(distance_to_boundary(a.outline, q) < 1e-9);
}

TEST_CASE("optimized-class pad fits the paper-scale footprint") {
  // Reference scale for the optimized pad: about 763 x 751 um.
  PadDesignVector v;
  v << 330, 30, 420, 200, 360, 380, 38, 376;
  const PadLayout pad = build_pad_outline(v);
  const Point2d size = pad.pads_bounding_box().size();
  CHECK(size.x() < 800.0);
  CHECK(size.x() > 650.0);
  CHECK(size.y() == doctest::Approx(752.0));
}

TEST_CASE("infeasible pad outlines are rejected") {
  PadDesignVector crossing;
  crossing << 300, 380, 300, 40, 10, 300, 40, 390;  // loops back on itself
  CHECK_THROWS_AS(build_pad_outline(crossing), InfeasibleGeometry);

  PadDesignVector too_big;
  too_big << 600, 60, 600, 200, 600, 380, 40, 390;
  CHECK_THROWS_AS(build_pad_outline(too_big), InfeasibleGeometry);

  PadDesignVector inverted = smooth_pad();
  inverted(7) = 20;
  CHECK_THROWS_AS(build_pad_outline(inverted), InfeasibleGeometry);
}

TEST_CASE("random feasible design vectors give simple polygons") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ux(20, 400), uy(10, 400), u0(10, 100), u4(150, 400);
  int feasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    PadDesignVector v;
    v << ux(rng), uy(rng), ux(rng), uy(rng), ux(rng), uy(rng), u0(rng), u4(rng);
    try {
      const PadLayout pad = build_pad_outline(v);
      ++feasible;
      for (const auto& c : pad.model.conductors)
        for (const auto& p : c.shape) CHECK(is_simple_polygon(p));
    } catch (const InfeasibleGeometry&) {
    }
  }
  CHECK(feasible > 20);
}

TEST_CASE("wire profiles") {
  SUBCASE("straight wire has constant half-width") {
    const WireProfile w = straight_wire(1.0, 81.0);
    for (int i = 0; i <= 100; ++i) CHECK(w.half_width(81.0 * i / 100) == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("control points on a line give the linear taper") {
    const WireProfile w = linear_taper(0.4, 1.0, 81.0);
    CHECK(w.half_width(0.0) == doctest::Approx(0.5));
    for (int i = 0; i <= 100; ++i) {
      const double y = 81.0 * i / 100;
      CHECK(w.half_width(y) == doctest::Approx(0.5 + 0.4 * y).epsilon(1e-12));
    }
  }
  SUBCASE("arbitrary profile matches the recursive spline oracle") {
    WireDesignVector v(4.0, 1.5, 9.0, 20.0);
    const WireProfile w = build_wire_profile(v, 81.0, 1.0);
    const auto ys = w.control_y();
    std::vector<Point2d> cps{Point2d(0.5, ys[0])};
    for (int i = 0; i < 4; ++i) cps.emplace_back(v(i), ys[i + 1]);
    for (int i = 0; i < 100; ++i) {
      const double t = (i + 0.5) / 100.0;
      const Point2d p = oracle::spline_point(cps, 3, t);
      // linear precision: the curve's y is exactly L t
      CHECK(p.y() == doctest::Approx(81.0 * t).epsilon(1e-12));
      CHECK(w.half_width(p.y()) == doctest::Approx(p.x()).epsilon(1e-12));
    }
  }
  SUBCASE("zero crossing is infeasible") {
    CHECK_THROWS_AS(build_wire_profile(WireDesignVector(-3.0, 2.0, 2.0, 2.0), 81.0, 1.0), InfeasibleGeometry);
  }
  SUBCASE("wire model layout is two mirrored conductors") {
    const Layout m = wire_model_layout(linear_taper(0.4, 1.0, 81.0));
    REQUIRE(m.conductors.size() == 2);
    CHECK(area(m.conductors[0].shape) == doctest::Approx(area(m.conductors[1].shape)));
    CHECK(m.gap_domain.empty());
  }
}

TEST_CASE("baselines") {
  SUBCASE("double pad footprint") {
    const auto pad = std::get<PadLayout>(make_baseline("double_pad"));
    const Point2d s = pad.pads_bounding_box().size();
    CHECK(s.x() == doctest::Approx(800));
    CHECK(s.y() == doctest::Approx(600));
    CHECK(pad.model.conductors.size() == 3);
  }
  SUBCASE("concentric outer diameter") {
    const auto pad = std::get<PadLayout>(make_baseline("concentric", {{"outer_diameter", 800}}));
    const Point2d s = pad.pads_bounding_box().size();
    CHECK(s.x() == doctest::Approx(800).epsilon(1e-9));
    CHECK(s.y() == doctest::Approx(800).epsilon(1e-9));
    REQUIRE(pad.model.conductors[1].shape.front().holes.size() == 1);
  }
  SUBCASE("straight wire") {
    const auto w = std::get<WireProfile>(make_baseline("straight_wire", {{"width", 1}, {"length", 81}}));
    CHECK(w.wire_length() == 81);
    CHECK(w.half_width(40) == doctest::Approx(0.5));
  }
  SUBCASE("unknown kind") { CHECK_THROWS_AS(make_baseline("meander"), UsageError); }
  SUBCASE("all pad baselines pass the simple-polygon check") {
    for (const char* k : {"double_pad", "concentric"}) {
      const auto pad = std::get<PadLayout>(make_baseline(k));
      for (const auto& c : pad.model.conductors)
        for (const auto& p : c.shape) CHECK(is_simple_polygon(p));
    }
  }
}

TEST_CASE("polygon offsets") {
  const Polygon square = rectangle(0, 0, 1000, 1000);
  SUBCASE("inward 1 um") {
    const auto s = offset_polygon(square, -1.0);
    REQUIRE(s.size() == 1);
    const Box2 b = bounding_box(s.front().outer);
    CHECK(b.size().x() == doctest::Approx(998.0).epsilon(1e-12));
    CHECK(area(s) == doctest::Approx(998.0 * 998.0).epsilon(1e-12));
  }
  SUBCASE("zero offset is the identity") {
    const auto s = offset_polygon(square, 0.0);
    REQUIRE(s.size() == 1);
    CHECK(s.front().outer == square.outer);
  }
  SUBCASE("eroding past the inradius is empty") { CHECK(offset_polygon(rectangle(0, 0, 1, 1), -0.6).empty()); }
  SUBCASE("area is monotone in distance") {
    const Polygon l{{Point2d(0, 0), Point2d(20, 0), Point2d(20, 10), Point2d(10, 10), Point2d(10, 20), Point2d(0, 20)},
                    {}};
    double prev = 0.0;
    for (double d : {-4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0}) {
      const double a = area(offset_polygon(l, d));
      CHECK(a > prev);
      prev = a;
    }
  }
  SUBCASE("L-shape erosion matches pixel erosion") {
    const Polygon l{{Point2d(0, 0), Point2d(20, 0), Point2d(20, 10), Point2d(10, 10), Point2d(10, 20), Point2d(0, 20)},
                    {}};
    const double h = 0.05;
    long count = 0;
    for (int i = 0; i < 400; ++i)
      for (int j = 0; j < 400; ++j) {
        const Point2d p((i + 0.5) * h, (j + 0.5) * h);
        if (contains(l, p) && distance_to_boundary(l, p) >= 1.0) ++count;
      }
    const double pixel_area = count * h * h;
    CHECK(area(offset_polygon(l, -1.0)) == doctest::Approx(pixel_area).epsilon(0.005));
  }
  SUBCASE("inward offsets compose for convex polygons") {
    const Polygon hex{{Point2d(0, 0), Point2d(40, -5), Point2d(70, 10), Point2d(65, 50), Point2d(20, 60),
                       Point2d(-10, 30)},
                      {}};
    const auto once = offset_polygon(hex, -3.5);
    const auto twice = offset_polygon(offset_polygon(hex, -1.25), -2.25);
    REQUIRE(once.size() == 1);
    REQUIRE(twice.size() == 1);
    for (const auto& p : twice.front().outer) CHECK(distance_to_boundary(once.front(), p) < 1e-9);
    for (const auto& p : once.front().outer) CHECK(distance_to_boundary(twice.front(), p) < 1e-9);
  }
}
