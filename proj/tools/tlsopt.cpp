#include "tlsopt/geometry/baseline.hpp"
#include "tlsopt/pipeline/run.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <iostream>

using namespace tlsopt;

namespace {

struct Options {
  std::string config;
  std::optional<long> budget;
  std::optional<int> mesh_level;
  bool seedless = false;
  std::string out;
  std::optional<double> wire_length;
  std::string geometry;
  std::string wire;
  std::string materials;
  std::string pad_run;
  std::optional<double> f01;
  bool resume = false;
  bool force = false;
  bool list = false;
  bool quiet = false;
  std::vector<std::string> runs;
};

RunConfig build_config(const Options& o, RunMode mode) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_run_config(o.config);
  c.mode = mode;
  if (o.budget) c.optimizer.termination.max_nfe = *o.budget;
  if (o.mesh_level) c.solver.mesh_level = *o.mesh_level;
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.wire_length) c.geometry.wire_length = *o.wire_length;
  if (!o.geometry.empty()) c.geometry.pad_geometry = o.geometry;
  if (!o.wire.empty()) c.geometry.wire_geometry = o.wire;
  if (!o.materials.empty()) c.materials = material_preset(o.materials);
  if (!o.pad_run.empty()) c.pad_run = o.pad_run;
  if (o.f01) c.f01_ghz = *o.f01;
  if (!o.runs.empty()) c.runs = o.runs;
  c.force = c.force || o.force;
  c.validate();
  return c;
}

void summarize(const RunRecord& r) {
  std::printf("status: %s\n", r.status.c_str());
  if (!r.termination.empty()) std::printf("termination: %s\n", r.termination.c_str());
  if (r.best_objective) std::printf("best objective: %.4f ppm\n", *r.best_objective * 1e6);
  if (r.wire_length) std::printf("wire length: %.3f um\n", *r.wire_length);
  if (r.ec_ghz) std::printf("E_C: %.4f GHz\n", *r.ec_ghz);
  for (const auto& rep : r.reports) {
    std::printf("%s\n", rep.geometry_id.c_str());
    for (auto i : kInterfaces) std::printf("  p_%s total: %.4f ppm\n", to_string(i).c_str(), rep.total(i) * 1e6);
    if (rep.q.unbounded)
      std::printf("  Q_TLS: unbounded\n");
    else
      std::printf("  Q_TLS: %.4e  T1: %.2f us\n", rep.q.value, rep.t1_us);
  }
  std::printf("output: %s\n", r.config.value("output", std::string()).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmon pad and junction-wire shape optimizer"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  Options o;
  app.add_flag("-q,--quiet", o.quiet, "Only warnings and errors on stderr");

  const auto common = [&o](CLI::App* s) {
    s->add_option("--config", o.config, "Run configuration (JSON)");
    s->add_option("--out", o.out, "Output directory");
    s->add_option("--mesh-level", o.mesh_level, "Mesh refinement level")->check(CLI::NonNegativeNumber);
    s->add_option("--materials", o.materials, "Material preset")->check(CLI::IsMember(material_preset_names()));
    s->add_option("--f01", o.f01, "Qubit frequency for T1 (GHz)")->check(CLI::PositiveNumber);
  };
  const auto optimizing = [&o](CLI::App* s) {
    s->add_option("--budget", o.budget, "Maximum objective evaluations")->check(CLI::PositiveNumber);
    s->add_flag("--seedless", o.seedless, "Accepted for symmetry; DIRECT uses no random numbers");
    s->add_flag("--resume", o.resume, "Continue from checkpoints/latest.json in the output directory");
  };

  auto* pad = app.add_subcommand("optimize-pad", "Optimize the capacitor pad outline");
  common(pad);
  optimizing(pad);

  auto* wire = app.add_subcommand("optimize-wire", "Optimize the junction wire profile");
  common(wire);
  optimizing(wire);
  wire->add_option("--wire-length", o.wire_length, "Wire length (um)")->check(CLI::PositiveNumber);
  wire->add_option("--pad-run", o.pad_run, "Finished optimize-pad run directory")->check(CLI::ExistingDirectory);

  auto* eval = app.add_subcommand("evaluate", "Participation report for a geometry");
  common(eval);
  eval->add_option("--geometry", o.geometry, "Geometry file or baseline:<name>");
  eval->add_option("--wire", o.wire, "Wire geometry file or baseline:<name>");
  eval->add_option("--wire-length", o.wire_length, "Length for wire baselines (um)")->check(CLI::PositiveNumber);

  auto* base = app.add_subcommand("baselines", "Reference geometries");
  base->add_flag("--list", o.list, "List baseline names");

  auto* rep = app.add_subcommand("report", "Compare finished runs");
  rep->add_option("--runs", o.runs, "Run directories, first one is the reference")->required();
  rep->add_option("--out", o.out, "Output directory for the tables");
  rep->add_flag("--force", o.force, "Allow runs with different material presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  spdlog::set_level(o.quiet ? spdlog::level::warn : spdlog::level::info);

  try {
    if (*base) {
      for (const auto& n : baseline_names()) std::printf("%s\n", n.c_str());
      return 0;
    }
    if (*rep) {
      const std::string out = o.out.empty() ? "report" : o.out;
      write_report(o.runs, out, o.force);
      std::printf("wrote %s/comparison.csv, comparison.json, convergence.csv\n", out.c_str());
      return 0;
    }
    if (*pad) {
      summarize(optimize_pad(build_config(o, RunMode::OptimizePad), o.resume));
    } else if (*wire) {
      summarize(optimize_wire(build_config(o, RunMode::OptimizeWire), o.resume));
    } else if (*eval) {
      const RunConfig c = build_config(o, RunMode::Evaluate);
      if (c.geometry.pad_geometry.empty() && c.geometry.wire_geometry.empty())
        throw UsageError("evaluate needs --geometry or --wire");
      summarize(evaluate_run(c));
    }
    return 0;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
