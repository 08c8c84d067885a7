#pragma once

#include <Eigen/Core>
#include <json.hpp>

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace tlsopt {

/// Box of design variables in physical units. A variable with
/// lower == upper is held fixed.
struct DesignSpace {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::vector<std::string> names;

  DesignSpace() = default;
  DesignSpace(Eigen::VectorXd lo, Eigen::VectorXd hi, std::vector<std::string> names = {});

  Eigen::Index dimension() const { return lower.size(); }
  Eigen::VectorXd normalize(const Eigen::VectorXd& x) const;
  Eigen::VectorXd denormalize(const Eigen::VectorXd& u) const;
  void validate() const;
};

/// Power of one third, tabulated so that equal exponents give identical doubles.
double third_power(int k);

struct Hyperrectangle {
  Eigen::VectorXd center;  // unit cube
  Eigen::VectorXi level;   // side i is 3^-level(i)
  double f = 0.0;
  long id = 0;
  long trace_index = 0;  // row of the centre's evaluation

  int min_level() const { return level.minCoeff(); }
  /// Half-diagonal length.
  double size() const;
  double volume() const;
};

struct TerminationConfig {
  long max_nfe = 360;
  std::optional<long> max_iterations;
  double rel_tol = 0.5e-2;
  double abs_tol = 0.2e-6;
  int window = 3;
  double epsilon = 1e-4;
  bool dynamic = true;
  bool require_both = true;  // false: either inequality suffices
  double sentinel_floor = 1e-6;

  void validate() const;
};

enum class Termination { Continue, MaxNfe, MaxIterations, Dynamic };
std::string to_string(Termination t);

/// One objective call. `raw` and `penalty` add up to the value DIRECT sees;
/// throwing InfeasibleGeometry, MeshError, SolverError or NoSolution marks
/// the point infeasible.
struct Evaluation {
  double raw = 0.0;
  double penalty = 0.0;
  double ec_ghz = std::numeric_limits<double>::quiet_NaN();
  bool feasible = true;
  std::string note;

  double value() const { return raw + penalty; }
};

using Objective = std::function<Evaluation(const Eigen::VectorXd& x)>;

struct TraceRow {
  long nfe = 0;
  int iteration = 0;
  Eigen::VectorXd x;  // physical units
  Evaluation eval;
  double value = 0.0;  // value used by DIRECT (sentinel when infeasible)
  bool sentinel = false;
  double best = 0.0;
  double wall_seconds = 0.0;
};

struct IterationRecord {
  int iteration = 0;
  long nfe = 0;
  double f_current = 0.0;
  double f_mean = 0.0;
  double best = 0.0;
  std::size_t selected = 0;
};

/// Indices (into `d`/`f`) of the potentially optimal rectangles: those for
/// which some K > 0 gives f_j - K d_j <= f_k - K d_k for all k and
/// f_j - K d_j <= f_min - eps |f_min|.
std::vector<std::size_t> potentially_optimal(const std::vector<double>& d, const std::vector<double>& f,
                                             double epsilon);

struct OptimizerState {
  std::vector<Hyperrectangle> rects;
  long nfe = 0;
  int iteration = 0;
  long next_id = 0;
  std::size_t best = 0;  // index into rects
  std::vector<IterationRecord> iterations;
  std::vector<TraceRow> trace;
  long sentinels = 0;
  double max_finite = -std::numeric_limits<double>::infinity();
  Termination reason = Termination::Continue;

  double best_value() const { return rects.at(best).f; }
  double total_volume() const;
  std::vector<std::size_t> potentially_optimal(double epsilon) const;
};

/// Reason to stop after the iterations logged so far, or Continue.
Termination check_termination(const OptimizerState& state, const TerminationConfig& config);

/// Outcome of the dynamic test alone on a sequence of f_current values.
bool dynamic_converged(const std::vector<double>& f_current, const TerminationConfig& config);

struct OptimizationResult {
  Eigen::VectorXd best_x;
  double best_value = 0.0;
  Evaluation best_eval;
  long nfe = 0;
  int iterations = 0;
  Termination reason = Termination::Continue;
  std::vector<TraceRow> trace;
  std::vector<IterationRecord> iteration_log;
};

class DirectOptimizer {
 public:
  DirectOptimizer(DesignSpace space, Objective objective, TerminationConfig config = {});

  /// Evaluates the cube centre when nothing has been sampled yet.
  void initialize();
  /// One DIRECT iteration: select, trisect, log. Returns the termination
  /// status after it.
  Termination step();
  OptimizationResult run(const std::function<void(const DirectOptimizer&)>& on_iteration = {});

  /// Trisects one rectangle along its longest sides, sampling at most
  /// `budget` points. Returns the number of evaluations spent.
  long trisect(std::size_t index, long budget);

  const OptimizerState& state() const { return state_; }
  const DesignSpace& space() const { return space_; }
  const TerminationConfig& config() const { return config_; }
  OptimizationResult result() const;

  nlohmann::json checkpoint() const;
  static DirectOptimizer resume(const nlohmann::json& checkpoint, Objective objective);

 private:
  double evaluate(const Eigen::VectorXd& u, Evaluation& out, bool& sentinel);

  DesignSpace space_;
  Objective objective_;
  TerminationConfig config_;
  OptimizerState state_;
  double clock_origin_ = 0.0;
};

/// Sentinel value assigned to infeasible samples: 10x the largest finite
/// value seen, never below `floor`.
double sentinel_value(double max_finite, double floor);

inline constexpr int kCheckpointVersion = 1;

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace, const DesignSpace& space,
                     double value_scale = 1e6);

}  // namespace tlsopt
