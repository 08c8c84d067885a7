#pragma once

#include "tlsopt/optimizer/direct.hpp"
#include "tlsopt/pipeline/evaluate.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tlsopt {

enum class RunMode { OptimizePad, OptimizeWire, Evaluate, Baselines, Report };
std::string to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

struct GeometrySettings {
  PadConfig pad;
  std::optional<double> wire_length;  // µm; optimize-wire takes it from the pad run otherwise
  double junction_width = 1.0;
  std::string pad_geometry;   // evaluate: "baseline:<name>" or a geometry file
  std::string wire_geometry;  // evaluate: optional wire, same forms
};

struct OptimizerSettings {
  TerminationConfig termination;
  double beta = 1e-2;  // penalty weight per GHz^2, objective in absolute p
  double ec_threshold_ghz = 0.35;
  DesignSpace pad_space;
  DesignSpace wire_space;

  OptimizerSettings();
};

/// Pad design box: x1..x3, y1..y3, y0, y4 in µm.
DesignSpace default_pad_space();
/// Wire design box: half-widths of P1..P4 in µm.
DesignSpace default_wire_space();

struct RunConfig {
  RunMode mode = RunMode::Evaluate;
  GeometrySettings geometry;
  MaterialStack materials;
  SolverSettings solver;
  OptimizerSettings optimizer;
  double f01_ghz = 5.0;
  std::string output_dir = "runs/default";
  std::string pad_run;            // optimize-wire: directory of a finished pad run
  std::vector<std::string> runs;  // report
  bool force = false;             // report: allow mixed material presets

  RunConfig();
  void validate() const;
};

nlohmann::json to_json(const RunConfig& c);
/// Strict: unknown keys and unknown presets are configuration errors.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

struct RunRecord {
  nlohmann::json config;
  std::string version;
  std::string mode;
  std::map<std::string, double> timings;  // seconds per stage
  std::vector<ParticipationReport> reports;
  std::string trace_file;
  std::string termination;
  std::vector<std::string> artifacts;
  std::optional<double> best_objective;
  std::optional<double> wire_length;
  std::optional<double> ec_ghz;
  bool constraint_satisfied = true;
  std::string status = "ok";
};

nlohmann::json to_json(const RunRecord& r);

/// Resolves "baseline:<name>" or a geometry file into a bundle. Wire
/// baselines take `wire_length` when given.
GeometryBundle resolve_geometry(const std::string& pad_spec, const std::string& wire_spec,
                                const GeometrySettings& settings);

Objective make_pad_objective(const RunConfig& config);
Objective make_wire_objective(const RunConfig& config, double wire_length, double energy);

/// Each run writes config.json, trace.csv, geometry.json, geometry.svg,
/// report.json, run.json and checkpoints/ under config.output_dir.
/// Throws ConstraintUnsatisfied after writing everything when the optimum
/// violates the E_C constraint.
RunRecord optimize_pad(const RunConfig& config, bool resume = false);
RunRecord optimize_wire(const RunConfig& config, bool resume = false);
RunRecord evaluate_run(const RunConfig& config);

struct ComparisonTable {
  nlohmann::json json;
  std::string csv;
  std::string convergence_csv;
};

/// Table-1 style comparison of finished runs; percent reductions are
/// relative to the first run and recomputed from the stored p values.
ComparisonTable compare_runs(const std::vector<std::string>& run_dirs, bool force = false);
void write_report(const std::vector<std::string>& run_dirs, const std::string& out_dir, bool force = false);

std::string version_string();

}  // namespace tlsopt
