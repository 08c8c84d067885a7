#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "tlsopt/error.hpp"
#include "tlsopt/optimizer/direct.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

using namespace tlsopt;

namespace {

Objective plain(std::function<double(const Eigen::VectorXd&)> f) {
  return [f](const Eigen::VectorXd& x) {
    Evaluation e;
    e.raw = f(x);
    return e;
  };
}

DesignSpace box(int n, double lo, double hi) {
  return DesignSpace(Eigen::VectorXd::Constant(n, lo), Eigen::VectorXd::Constant(n, hi));
}

TerminationConfig budget_only(long nfe) {
  TerminationConfig c;
  c.max_nfe = nfe;
  c.dynamic = false;
  return c;
}

double sphere(const Eigen::VectorXd& x) { return x.squaredNorm(); }
double camel(const Eigen::VectorXd& x) { return oracle::six_hump_camel(x(0), x(1)); }

}  // namespace

TEST_CASE("design space normalization round trip") {
  DesignSpace s(Eigen::Vector3d(20, 10, -5), Eigen::Vector3d(400, 100, 5));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd v(3);
    for (int i = 0; i < 3; ++i) v(i) = u(rng);
    CHECK((s.normalize(s.denormalize(v)) - v).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(DesignSpace(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)), ConfigError);
  // a collapsed variable stays at its value
  DesignSpace fixed(Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 2));
  CHECK(fixed.denormalize(Eigen::Vector2d(0.9, 0.5))(0) == 1.0);
}

TEST_CASE("potentially optimal selection") {
  CHECK(potentially_optimal({0.5}, {3.0}, 1e-4) == std::vector<std::size_t>{0});
  CHECK(potentially_optimal({0.5, 0.5}, {1.0, 2.0}, 1e-4) == std::vector<std::size_t>{0});
  // identical (d, f) ties are all kept
  CHECK(potentially_optimal({0.5, 0.5, 0.1}, {1.0, 1.0, 2.0}, 1e-4) == std::vector<std::size_t>{0, 1});
  // with eps = 0 and one size class the selection is the argmin
  CHECK(potentially_optimal({0.2, 0.2, 0.2}, {3.0, -1.0, 2.0}, 0.0) == std::vector<std::size_t>{1});
}

TEST_CASE("potentially optimal matches the definitional brute force on random states") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> count(1, 40), lvl(0, 6), dup(0, 9);
  std::uniform_real_distribution<double> val(-2.0, 5.0);
  std::uniform_real_distribution<double> eps_pick(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = count(rng);
    std::vector<double> d, f;
    for (int i = 0; i < n; ++i) {
      if (i > 0 && dup(rng) == 0) {
        d.push_back(d.back());
        f.push_back(f.back());
        continue;
      }
      Hyperrectangle r;
      r.level = Eigen::VectorXi(3);
      for (int k = 0; k < 3; ++k) r.level(k) = lvl(rng);
      d.push_back(r.size());
      f.push_back(val(rng));
    }
    const double eps = eps_pick(rng) < 0.5 ? 1e-4 : 0.0;
    INFO("trial " << trial);
    CHECK(potentially_optimal(d, f, eps) == oracle::potentially_optimal(d, f, eps));
  }
}

TEST_CASE("trisection in one dimension") {
  DirectOptimizer opt(box(1, 0, 1), plain(sphere), budget_only(10));
  opt.initialize();
  CHECK(opt.trisect(0, 10) == 2);
  std::multiset<double> centers;
  for (const auto& r : opt.state().rects) {
    centers.insert(r.center(0));
    CHECK(r.level(0) == 1);
    CHECK(r.volume() == doctest::Approx(1.0 / 3.0));
  }
  auto it = centers.begin();
  CHECK(*it++ == doctest::Approx(1.0 / 6.0));
  CHECK(*it++ == doctest::Approx(0.5));
  CHECK(*it == doctest::Approx(5.0 / 6.0));
  CHECK(opt.state().nfe == 3);
}

TEST_CASE("first two-dimensional trisection divides the better dimension first") {
  // hand-traced: samples along dim 1 reach 0.833, much closer to 0.8 than
  // dim 0 can get to 0.05, so dim 1 is split first
  auto f = [](const Eigen::VectorXd& u) { return 0.1 * (u(0) - 0.05) * (u(0) - 0.05) + (u(1) - 0.8) * (u(1) - 0.8); };
  DirectOptimizer opt(box(2, 0, 1), plain(f), budget_only(10));
  opt.initialize();
  opt.trisect(0, 10);
  const auto& rects = opt.state().rects;
  REQUIRE(rects.size() == 5);
  int small = 0, tall = 0;
  for (const auto& r : rects) {
    if (r.level == Eigen::Vector2i(1, 1)) ++small;
    if (r.level == Eigen::Vector2i(0, 1)) ++tall;
  }
  CHECK(small == 3);
  CHECK(tall == 2);
  // the dim-1 children keep the full dim-0 side
  for (const auto& r : rects)
    if (r.level == Eigen::Vector2i(0, 1)) CHECK(r.center(0) == doctest::Approx(0.5));
  CHECK(rects[0].level == Eigen::Vector2i(1, 1));
}

TEST_CASE("run invariants") {
  DirectOptimizer opt(box(3, -1, 2), plain(sphere), budget_only(200));
  opt.initialize();
  double prev_best = opt.state().best_value();
  while (opt.step() == Termination::Continue) {
    const auto& st = opt.state();
    CHECK(st.total_volume() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(st.nfe == static_cast<long>(st.rects.size()));
    CHECK(st.nfe == static_cast<long>(st.trace.size()));
    CHECK(st.best_value() <= prev_best);
    prev_best = st.best_value();
    double fmin = st.rects[0].f;
    for (const auto& r : st.rects) fmin = std::min(fmin, r.f);
    CHECK(st.best_value() == fmin);
    // the best rectangle of the largest size class is always selected
    double dmax = 0.0;
    for (const auto& r : st.rects) dmax = std::max(dmax, r.size());
    double fbig = std::numeric_limits<double>::infinity();
    for (const auto& r : st.rects)
      if (r.size() == dmax) fbig = std::min(fbig, r.f);
    bool found = false;
    for (std::size_t k : st.potentially_optimal(opt.config().epsilon))
      found = found || (st.rects[k].size() == dmax && st.rects[k].f == fbig);
    CHECK(found);
  }
  std::set<std::vector<double>> centers;
  for (const auto& r : opt.state().rects) centers.insert(std::vector<double>(r.center.data(), r.center.data() + 3));
  CHECK(centers.size() == opt.state().rects.size());
}

TEST_CASE("sphere and six-hump camel reach the grid optimum") {
  const double sphere_grid = oracle::grid_minimum([](double x, double y) { return x * x + y * y; }, -1, 1, -1, 1, 1000);
  const auto rs = DirectOptimizer(box(2, -1, 1), plain(sphere), budget_only(100)).run();
  CHECK(rs.best_value <= 1e-3);
  CHECK(rs.best_value <= sphere_grid + 1e-3);

  // shifted sphere so the centre is not the answer
  auto shifted = [](const Eigen::VectorXd& x) { return (x - Eigen::Vector2d(0.3, -0.7)).squaredNorm(); };
  CHECK(DirectOptimizer(box(2, -1, 1), plain(shifted), budget_only(100)).run().best_value <= 1e-3);

  const double camel_grid = oracle::grid_minimum(oracle::six_hump_camel, -3, 3, -2, 2, 1000);
  DesignSpace s(Eigen::Vector2d(-3, -2), Eigen::Vector2d(3, 2));
  const auto rc = DirectOptimizer(s, plain(camel), budget_only(300)).run();
  CHECK(rc.nfe <= 300);
  CHECK(std::abs(rc.best_value - camel_grid) <= 0.01 * std::abs(camel_grid));
}

TEST_CASE("termination rules") {
  TerminationConfig cfg;
  CHECK_FALSE(dynamic_converged({1.0, 0.5, 0.25}, cfg));
  CHECK(dynamic_converged({1.0000006e-4, 1.0000006e-4, 1.000000e-4}, cfg));
  // relative change fine, absolute change too large
  CHECK_FALSE(dynamic_converged({1.0, 1.0, 1.001}, cfg));
  // absolute change fine, relative change too large
  CHECK_FALSE(dynamic_converged({1e-9, 1e-9, 2e-9}, cfg));
  cfg.require_both = false;
  CHECK(dynamic_converged({1e-9, 1e-9, 2e-9}, cfg));
  CHECK_FALSE(dynamic_converged({1.0, 1.0}, TerminationConfig{}));

  // constant objective stops at the first iteration with a full window
  DirectOptimizer c(box(4, 0, 1), plain([](const Eigen::VectorXd&) { return 2.5e-5; }));
  const auto rc = c.run();
  CHECK(rc.reason == Termination::Dynamic);
  CHECK(rc.iterations == 3);
  CHECK(rc.nfe < 360);

  // budget cap: never exceeded; pairs of samples leave an even cap one short
  const auto r8 = DirectOptimizer(box(8, -1, 2), plain(sphere), budget_only(360)).run();
  CHECK(r8.reason == Termination::MaxNfe);
  CHECK(r8.nfe == 359);
  const auto r1 = DirectOptimizer(box(1, -1, 2), plain(sphere), budget_only(361)).run();
  CHECK(r1.nfe == 361);
  const auto rb = DirectOptimizer(box(8, -1, 2), plain(sphere), budget_only(1)).run();
  CHECK(rb.nfe == 1);
  CHECK((rb.best_x - Eigen::VectorXd::Constant(8, 0.5)).norm() < 1e-15);

  TerminationConfig it;
  it.max_iterations = 4;
  it.dynamic = false;
  CHECK(DirectOptimizer(box(2, -1, 1), plain(sphere), it).run().iterations == 4);
}

TEST_CASE("infeasible samples get the sentinel") {
  CHECK(sentinel_value(3.0, 1e-6) == 30.0);
  CHECK(sentinel_value(-1.0, 1e-6) == 1e-6);
  auto f = [](const Eigen::VectorXd& x) -> Evaluation {
    if (x(0) > 0.6) throw InfeasibleGeometry("outline self-intersects");
    Evaluation e;
    e.raw = x.squaredNorm();
    return e;
  };
  const auto r = DirectOptimizer(box(2, -1, 1), f, budget_only(60)).run();
  long sentinels = 0;
  for (const auto& t : r.trace) {
    if (t.sentinel) {
      ++sentinels;
      CHECK_FALSE(t.eval.feasible);
      CHECK(t.value > 0.0);
    }
  }
  CHECK(sentinels > 0);
  CHECK(r.best_value < 1e-2);

  auto bad = [](const Eigen::VectorXd& x) -> Evaluation {
    if (x(0) > -0.9) throw SolverError("singular");
    return Evaluation{};
  };
  CHECK_THROWS_AS(DirectOptimizer(box(2, -1, 1), bad, budget_only(60)).run(), OptimizationAborted);
}

TEST_CASE("penalty composition") {
  auto f = [](const Eigen::VectorXd& x) {
    Evaluation e;
    e.raw = x(0);
    e.penalty = x(0) < 0.3 ? 10.0 * (0.3 - x(0)) * (0.3 - x(0)) : 0.0;
    return e;
  };
  const auto r = DirectOptimizer(box(1, 0, 1), f, budget_only(41)).run();
  CHECK(r.best_value == doctest::Approx(r.best_eval.raw + r.best_eval.penalty));
  CHECK(r.best_x(0) > 0.2);
}

TEST_CASE("determinism and resume") {
  DesignSpace s(Eigen::Vector2d(-3, -2), Eigen::Vector2d(3, 2));
  const auto a = DirectOptimizer(s, plain(camel), budget_only(150)).run();
  const auto b = DirectOptimizer(s, plain(camel), budget_only(150)).run();
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    CHECK(a.trace[k].x == b.trace[k].x);
    CHECK(a.trace[k].value == b.trace[k].value);
  }

  DirectOptimizer first(s, plain(camel), budget_only(150));
  first.initialize();
  for (int k = 0; k < 4; ++k) first.step();
  const std::string saved = first.checkpoint().dump();
  auto resumed = DirectOptimizer::resume(nlohmann::json::parse(saved), plain(camel));
  const auto c = resumed.run();
  CHECK(c.nfe == a.nfe);
  CHECK(c.best_value == a.best_value);
  REQUIRE(c.trace.size() == a.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) CHECK(c.trace[k].x == a.trace[k].x);
}

TEST_CASE("trace csv") {
  const auto path = std::filesystem::temp_directory_path() / "tlsopt_trace_test.csv";
  DirectOptimizer opt(box(2, -1, 1), plain(sphere), budget_only(21));
  const auto r = opt.run();
  write_trace_csv(path.string(), r.trace, opt.space(), 1.0);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "nfe,iteration,x0,x1,raw,penalty,value,best,ec_ghz,sentinel,wall_seconds");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 21);
  std::filesystem::remove(path);
}
