#include "tlsopt/pipeline/run.hpp"

#include "tlsopt/geometry/baseline.hpp"
#include "tlsopt/participation/transmon.hpp"
#include "tlsopt/pipeline/json_fields.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace tlsopt {
namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

nlohmann::json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vec_from(const nlohmann::json& j, Eigen::Index n, const std::string& where) {
  std::vector<double> v;
  try {
    v = j.get<std::vector<double>>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + " must be a list of numbers");
  }
  if (static_cast<Eigen::Index>(v.size()) != n) throw ConfigError(where + " needs " + std::to_string(n) + " values");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), n);
}

nlohmann::json space_json(const DesignSpace& s) {
  return {{"lower", vec_json(s.lower)}, {"upper", vec_json(s.upper)}};
}

DesignSpace space_from(const nlohmann::json& j, const DesignSpace& defaults, const std::string& where) {
  FieldReader r(j, where);
  Eigen::VectorXd lo = defaults.lower, hi = defaults.upper;
  if (r.has("lower")) lo = vec_from(r.at("lower"), defaults.dimension(), where + ".lower");
  if (r.has("upper")) hi = vec_from(r.at("upper"), defaults.dimension(), where + ".upper");
  r.finish();
  return DesignSpace(lo, hi, defaults.names);
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + " is not valid JSON: " + e.what());
  }
}

fs::path prepare_output(const RunConfig& config) {
  const fs::path out(config.output_dir);
  std::error_code ec;
  fs::create_directories(out / "checkpoints", ec);
  if (ec) throw ConfigError("cannot create output directory " + out.string() + ": " + ec.message());
  write_json(out / "config.json", to_json(config));
  return out;
}

std::string timestamp() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_record(const fs::path& dir, RunRecord& record) {
  record.artifacts.push_back("run.json");
  nlohmann::json j = to_json(record);
  j["metadata"] = {{"finished", timestamp()}};
  write_json(dir / "run.json", j);
}

ParticipationReport report_for(const GeometryBundle& g, const RunConfig& config,
                               std::optional<double> wire_energy = std::nullopt) {
  return evaluate_geometry(g, config.materials, config.solver, config.f01_ghz, true, wire_energy);
}

struct OptimizationOutcome {
  OptimizationResult result;
  DesignSpace space;
};

OptimizationOutcome run_direct(const fs::path& dir, const DesignSpace& space, const Objective& objective,
                               const TerminationConfig& termination, bool resume, RunRecord& record) {
  const fs::path ckpt = dir / "checkpoints" / "latest.json";
  std::optional<DirectOptimizer> opt;
  if (resume && fs::exists(ckpt)) {
    opt.emplace(DirectOptimizer::resume(read_json(ckpt), objective));
    spdlog::info("resuming at NFE {}", opt->state().nfe);
  } else {
    opt.emplace(space, objective, termination);
  }
  const auto save = [&](const DirectOptimizer& o) {
    write_json(ckpt, o.checkpoint());
    const auto& st = o.state();
    spdlog::info("iteration {}: NFE {} best {:.4f} ppm", st.iteration, st.nfe, st.best_value() * 1e6);
  };
  try {
    OptimizationResult r = opt->run(save);
    write_trace_csv((dir / "trace.csv").string(), r.trace, opt->space());
    record.trace_file = "trace.csv";
    record.artifacts.push_back("trace.csv");
    record.artifacts.push_back("checkpoints/latest.json");
    return {std::move(r), opt->space()};
  } catch (const OptimizationAborted&) {
    write_trace_csv((dir / "trace.csv").string(), opt->state().trace, opt->space());
    record.status = "aborted";
    record.trace_file = "trace.csv";
    record.artifacts.push_back("trace.csv");
    write_record(dir, record);
    throw;
  }
}

void emit_geometry(const fs::path& dir, const GeometryBundle& g, const RunConfig& config, RunRecord& record) {
  save_geometry((dir / "geometry.json").string(), g);
  save_svg((dir / "geometry.svg").string(), g, config.solver.wire.model);
  record.artifacts.push_back("geometry.json");
  record.artifacts.push_back("geometry.svg");
}

void emit_report(const fs::path& dir, const ParticipationReport& report, RunRecord& record) {
  write_json(dir / "report.json", to_json(report));
  record.reports.push_back(report);
  record.artifacts.push_back("report.json");
}

double ppm(double p) { return p * 1e6; }

}  // namespace

std::string version_string() { return "tlsopt 0.1.0"; }

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::OptimizePad: return "optimize-pad";
    case RunMode::OptimizeWire: return "optimize-wire";
    case RunMode::Evaluate: return "evaluate";
    case RunMode::Baselines: return "baselines";
    case RunMode::Report: return "report";
  }
  return "evaluate";
}

RunMode run_mode_from_string(const std::string& s) {
  for (auto m : {RunMode::OptimizePad, RunMode::OptimizeWire, RunMode::Evaluate, RunMode::Baselines, RunMode::Report})
    if (to_string(m) == s) return m;
  throw ConfigError("unknown mode '" + s + "'");
}

DesignSpace default_pad_space() {
  Eigen::VectorXd lo(8), hi(8);
  lo << 20, 10, 20, 10, 20, 10, 10, 150;
  hi << 400, 400, 400, 400, 400, 400, 100, 400;
  return DesignSpace(lo, hi, {"x1", "y1", "x2", "y2", "x3", "y3", "y0", "y4"});
}

DesignSpace default_wire_space() {
  return DesignSpace(Eigen::Vector4d::Constant(0.5), Eigen::Vector4d::Constant(45.0), {"r1", "r2", "r3", "r4"});
}

OptimizerSettings::OptimizerSettings() : pad_space(default_pad_space()), wire_space(default_wire_space()) {
  termination.max_nfe = 100;
}

RunConfig::RunConfig() : materials(material_preset("simplified")) {}

void RunConfig::validate() const {
  materials.validate();
  solver.validate();
  optimizer.termination.validate();
  optimizer.pad_space.validate();
  optimizer.wire_space.validate();
  if (optimizer.pad_space.dimension() != 8) throw ConfigError("pad design space needs 8 variables");
  if (optimizer.wire_space.dimension() != 4) throw ConfigError("wire design space needs 4 variables");
  if (!(optimizer.beta > 0.0)) throw ConfigError("beta must be > 0");
  if (!(optimizer.ec_threshold_ghz > 0.0)) throw ConfigError("ec_threshold_ghz must be > 0");
  if (!(f01_ghz > 0.0)) throw ConfigError("f01_ghz must be > 0");
  if (geometry.wire_length && !(*geometry.wire_length > 0.0)) throw ConfigError("wire_length must be > 0");
  if (!(geometry.junction_width > 0.0)) throw ConfigError("junction_width must be > 0");
  if (output_dir.empty()) throw ConfigError("output directory is empty");
}

nlohmann::json to_json(const RunConfig& c) {
  using nlohmann::json;
  const auto& t = c.optimizer.termination;
  const auto& p = c.geometry.pad;
  json j;
  j["mode"] = to_string(c.mode);
  j["geometry"] = {{"footprint_limit", {p.footprint_limit.x(), p.footprint_limit.y()}},
                   {"ground_gap", p.ground_gap},
                   {"frame_width", p.frame_width},
                   {"spline_degree", p.degree},
                   {"chord_tolerance", p.chord_tolerance},
                   {"min_pad_separation", p.min_pad_separation},
                   {"wire_length", c.geometry.wire_length ? json(*c.geometry.wire_length) : json(nullptr)},
                   {"junction_width", c.geometry.junction_width},
                   {"pad", c.geometry.pad_geometry},
                   {"wire", c.geometry.wire_geometry}};
  j["materials"] = to_json(c.materials);
  j["solver"] = to_json(c.solver);
  j["optimizer"] = {{"budget", t.max_nfe},
                    {"max_iterations", t.max_iterations ? json(*t.max_iterations) : json(nullptr)},
                    {"rel_tol", t.rel_tol},
                    {"abs_tol", t.abs_tol},
                    {"window", t.window},
                    {"epsilon", t.epsilon},
                    {"dynamic", t.dynamic},
                    {"require_both", t.require_both},
                    {"sentinel_floor", t.sentinel_floor},
                    {"beta", c.optimizer.beta},
                    {"ec_threshold_ghz", c.optimizer.ec_threshold_ghz},
                    {"pad_bounds", space_json(c.optimizer.pad_space)},
                    {"wire_bounds", space_json(c.optimizer.wire_space)}};
  j["f01_ghz"] = c.f01_ghz;
  j["output"] = c.output_dir;
  j["pad_run"] = c.pad_run;
  j["runs"] = c.runs;
  j["force"] = c.force;
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  FieldReader r(j, "config");
  std::string mode = to_string(c.mode);
  r.get("mode", mode);
  c.mode = run_mode_from_string(mode);
  if (r.has("geometry")) {
    FieldReader g(r.at("geometry"), "geometry");
    auto& p = c.geometry.pad;
    std::vector<double> fp{p.footprint_limit.x(), p.footprint_limit.y()};
    g.get("footprint_limit", fp);
    if (fp.size() != 2) throw ConfigError("geometry.footprint_limit needs two values");
    p.footprint_limit = Point2d(fp[0], fp[1]);
    double wl = 0.0;
    g.get("ground_gap", p.ground_gap)
        .get("frame_width", p.frame_width)
        .get("spline_degree", p.degree)
        .get("chord_tolerance", p.chord_tolerance)
        .get("min_pad_separation", p.min_pad_separation)
        .get("junction_width", c.geometry.junction_width)
        .get("pad", c.geometry.pad_geometry)
        .get("wire", c.geometry.wire_geometry);
    if (g.has("wire_length")) {
      g.get("wire_length", wl);
      c.geometry.wire_length = wl;
    }
    g.finish();
  }
  if (r.has("materials")) {
    try {
      c.materials = material_stack_from_json(r.at("materials"));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("materials: ") + e.what());
    }
  }
  if (r.has("solver")) c.solver = solver_settings_from_json(r.at("solver"));
  if (r.has("optimizer")) {
    FieldReader o(r.at("optimizer"), "optimizer");
    auto& t = c.optimizer.termination;
    long max_it = 0;
    o.get("budget", t.max_nfe)
        .get("rel_tol", t.rel_tol)
        .get("abs_tol", t.abs_tol)
        .get("window", t.window)
        .get("epsilon", t.epsilon)
        .get("dynamic", t.dynamic)
        .get("require_both", t.require_both)
        .get("sentinel_floor", t.sentinel_floor)
        .get("beta", c.optimizer.beta)
        .get("ec_threshold_ghz", c.optimizer.ec_threshold_ghz);
    if (o.has("max_iterations")) {
      o.get("max_iterations", max_it);
      t.max_iterations = max_it;
    }
    if (o.has("pad_bounds")) c.optimizer.pad_space = space_from(o.at("pad_bounds"), default_pad_space(), "optimizer.pad_bounds");
    if (o.has("wire_bounds"))
      c.optimizer.wire_space = space_from(o.at("wire_bounds"), default_wire_space(), "optimizer.wire_bounds");
    o.finish();
  }
  r.get("f01_ghz", c.f01_ghz).get("output", c.output_dir).get("pad_run", c.pad_run).get("runs", c.runs).get("force", c.force);
  r.finish();
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) { return run_config_from_json(read_json(path)); }

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& rep : r.reports) reports.push_back(to_json(rep));
  nlohmann::json timings = nlohmann::json::object();
  for (const auto& [k, v] : r.timings) timings[k] = v;
  const auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"version", r.version},
          {"mode", r.mode},
          {"status", r.status},
          {"config", r.config},
          {"timings_s", timings},
          {"reports", reports},
          {"trace", r.trace_file},
          {"termination", r.termination},
          {"artifacts", r.artifacts},
          {"best_objective_ppm", r.best_objective ? nlohmann::json(ppm(*r.best_objective)) : nlohmann::json(nullptr)},
          {"wire_length_um", opt(r.wire_length)},
          {"ec_ghz", opt(r.ec_ghz)},
          {"constraint_satisfied", r.constraint_satisfied}};
}

GeometryBundle resolve_geometry(const std::string& pad_spec, const std::string& wire_spec,
                                const GeometrySettings& settings) {
  GeometryBundle g;
  g.junction_width = settings.junction_width;
  const std::string prefix = "baseline:";
  const auto load = [&](const std::string& spec, bool want_wire) {
    if (spec.rfind(prefix, 0) == 0) {
      const std::string name = spec.substr(prefix.size());
      BaselineParams params;
      const BaselineKind kind = baseline_kind_from_string(name);
      const bool is_wire = kind == BaselineKind::StraightWire || kind == BaselineKind::LinearTaper;
      if (is_wire && settings.wire_length) params["length"] = *settings.wire_length;
      if (kind == BaselineKind::StraightWire) params["width"] = settings.junction_width;
      if (kind == BaselineKind::LinearTaper) params["junction_width"] = settings.junction_width;
      BaselineGeometry b = make_baseline(kind, params, settings.pad);
      if (std::holds_alternative<PadLayout>(b)) {
        if (want_wire) throw UsageError(name + " is a pad baseline, not a wire");
        g.pad = std::get<PadLayout>(b);
      } else {
        if (!want_wire && !wire_spec.empty()) throw UsageError(name + " is a wire baseline, not a pad");
        g.wire = std::get<WireProfile>(b);
        g.wire_kind = name;
      }
      return;
    }
    GeometryBundle file = load_geometry(spec);
    if (file.pad && !want_wire) g.pad = file.pad;
    if (file.wire && (want_wire || wire_spec.empty())) {
      g.wire = file.wire;
      g.wire_kind = file.wire_kind;
      g.junction_width = file.junction_width;
    }
  };
  if (!pad_spec.empty()) load(pad_spec, false);
  if (!wire_spec.empty()) load(wire_spec, true);
  if (!g.pad && !g.wire) throw UsageError("no geometry given");
  return g;
}

Objective make_pad_objective(const RunConfig& config) {
  return [config](const Eigen::VectorXd& x) {
    const PadLayout pad = build_pad_outline(PadDesignVector(x), config.geometry.pad);
    const PadSolve s = solve_pad_interior(pad, config.materials, config.solver, config.solver.refinement_check ? 1 : 0);
    Evaluation e;
    e.raw = s.interior_ms;
    e.ec_ghz = s.ec_ghz;
    e.penalty = ec_penalty(s.ec_ghz, config.optimizer.beta, config.optimizer.ec_threshold_ghz);
    return e;
  };
}

Objective make_wire_objective(const RunConfig& config, double wire_length, double energy) {
  return [config, wire_length, energy](const Eigen::VectorXd& x) {
    const WireProfile w = build_wire_profile(WireDesignVector(x), wire_length, config.geometry.junction_width);
    Evaluation e;
    e.raw = evaluate_wire(w, config.materials, config.solver, energy, config.solver.refinement_check ? 1 : 0).p[0];
    return e;
  };
}

RunRecord optimize_pad(const RunConfig& config, bool resume) {
  config.validate();
  const fs::path dir = prepare_output(config);
  RunRecord record;
  record.config = to_json(config);
  record.version = version_string();
  record.mode = to_string(RunMode::OptimizePad);
  record.artifacts.push_back("config.json");
  Stopwatch clock;

  const OptimizationOutcome out = run_direct(dir, config.optimizer.pad_space, make_pad_objective(config),
                                             config.optimizer.termination, resume, record);
  record.timings["optimize"] = clock.lap();
  record.termination = to_string(out.result.reason);
  record.best_objective = out.result.best_value;
  record.ec_ghz = out.result.best_eval.ec_ghz;

  GeometryBundle g;
  g.pad = build_pad_outline(PadDesignVector(out.result.best_x), config.geometry.pad);
  record.wire_length = g.pad->wire_length;
  emit_geometry(dir, g, config, record);
  emit_report(dir, report_for(g, config), record);
  record.timings["report"] = clock.lap();

  record.constraint_satisfied = out.result.best_eval.feasible && record.ec_ghz &&
                                *record.ec_ghz <= config.optimizer.ec_threshold_ghz;
  if (!record.constraint_satisfied) record.status = "constraint-unsatisfied";
  write_record(dir, record);
  if (!record.constraint_satisfied)
    throw ConstraintUnsatisfied("optimum E_C " + std::to_string(record.ec_ghz.value_or(NAN)) + " GHz exceeds " +
                                std::to_string(config.optimizer.ec_threshold_ghz) + " GHz");
  return record;
}

RunRecord optimize_wire(const RunConfig& config, bool resume) {
  config.validate();
  std::optional<PadLayout> pad;
  if (!config.pad_run.empty()) {
    const GeometryBundle pg = load_geometry((fs::path(config.pad_run) / "geometry.json").string());
    if (!pg.pad) throw ConfigError("pad run " + config.pad_run + " holds no pad geometry");
    pad = pg.pad;
  } else if (!config.geometry.pad_geometry.empty()) {
    pad = resolve_geometry(config.geometry.pad_geometry, "", config.geometry).pad;
  }
  double length = 0.0;
  if (config.geometry.wire_length)
    length = *config.geometry.wire_length;
  else if (pad)
    length = pad->wire_length;
  else
    throw ConfigError("optimize-wire needs a wire length or a pad run");

  const fs::path dir = prepare_output(config);
  RunRecord record;
  record.config = to_json(config);
  record.version = version_string();
  record.mode = to_string(RunMode::OptimizeWire);
  record.artifacts.push_back("config.json");
  record.wire_length = length;
  Stopwatch clock;

  const double energy = pad ? solve_pad_interior(*pad, config.materials, config.solver).energy
                            : reference_pad_energy(config.materials, config.solver);
  record.timings["pad_energy"] = clock.lap();

  const OptimizationOutcome out = run_direct(dir, config.optimizer.wire_space,
                                             make_wire_objective(config, length, energy),
                                             config.optimizer.termination, resume, record);
  record.timings["optimize"] = clock.lap();
  record.termination = to_string(out.result.reason);
  record.best_objective = out.result.best_value;

  GeometryBundle g;
  g.pad = pad;
  g.wire = build_wire_profile(WireDesignVector(out.result.best_x), length, config.geometry.junction_width);
  g.junction_width = config.geometry.junction_width;
  emit_geometry(dir, g, config, record);
  emit_report(dir, report_for(g, config, energy), record);
  if (pad) record.ec_ghz = record.reports.back().ec_ghz;
  record.timings["report"] = clock.lap();
  write_record(dir, record);
  return record;
}

RunRecord evaluate_run(const RunConfig& config) {
  config.validate();
  const GeometryBundle g = resolve_geometry(config.geometry.pad_geometry, config.geometry.wire_geometry, config.geometry);
  const fs::path dir = prepare_output(config);
  RunRecord record;
  record.config = to_json(config);
  record.version = version_string();
  record.mode = to_string(RunMode::Evaluate);
  record.artifacts.push_back("config.json");
  Stopwatch clock;
  emit_geometry(dir, g, config, record);
  emit_report(dir, report_for(g, config), record);
  record.timings["evaluate"] = clock.lap();
  if (g.pad) {
    record.ec_ghz = record.reports.back().ec_ghz;
    record.wire_length = g.pad->wire_length;
  }
  if (g.wire) record.wire_length = g.wire->wire_length();
  write_record(dir, record);
  return record;
}

ComparisonTable compare_runs(const std::vector<std::string>& run_dirs, bool force) {
  if (run_dirs.empty()) throw UsageError("report needs at least one run directory");
  std::vector<ParticipationReport> reports;
  std::vector<std::string> names;
  for (const auto& d : run_dirs) {
    reports.push_back(report_from_json(read_json(fs::path(d) / "report.json")));
    names.push_back(fs::path(d).filename().string().empty() ? d : fs::path(d).filename().string());
  }
  for (const auto& r : reports)
    if (r.material_preset != reports.front().material_preset && !force)
      throw ConfigError("runs use different material presets (" + reports.front().material_preset + ", " +
                        r.material_preset + "); pass --force to compare anyway");

  ComparisonTable t;
  std::ostringstream csv;
  csv.precision(6);
  csv << "run,geometry,preset";
  for (auto i : kInterfaces) {
    const std::string n = to_string(i);
    csv << ',' << n << "_interior_ppm," << n << "_perimeter_ppm," << n << "_wire_ppm," << n << "_total_ppm," << n
        << "_reduction_pct";
  }
  csv << ",ec_ghz,q_tls,t1_us\n";
  nlohmann::json rows = nlohmann::json::array();
  const ParticipationReport& ref = reports.front();
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    nlohmann::json row = {{"run", names[k]}, {"geometry", r.geometry_id}, {"preset", r.material_preset}};
    csv << names[k] << ',' << r.geometry_id << ',' << r.material_preset;
    for (auto i : kInterfaces) {
      const int n = static_cast<int>(i);
      const double total = r.total(i);
      const double base = ref.total(i);
      const double reduction = base > 0.0 ? 100.0 * (1.0 - total / base) : 0.0;
      row[to_string(i)] = {{"interior_ppm", ppm(r.pad[n].interior)},
                           {"perimeter_ppm", ppm(r.pad[n].perimeter())},
                           {"wire_ppm", ppm(r.wire[n])},
                           {"total_ppm", ppm(total)},
                           {"reduction_pct", reduction}};
      csv << ',' << ppm(r.pad[n].interior) << ',' << ppm(r.pad[n].perimeter()) << ',' << ppm(r.wire[n]) << ','
          << ppm(total) << ',' << reduction;
    }
    row["ec_ghz"] = r.ec_ghz;
    row["q_tls"] = r.q.unbounded ? nlohmann::json("unbounded") : nlohmann::json(r.q.value);
    row["t1_us"] = r.q.unbounded ? nlohmann::json("unbounded") : nlohmann::json(r.t1_us);
    if (!ref.q.unbounded && !r.q.unbounded) row["q_ratio"] = r.q.value / ref.q.value;
    csv << ',' << r.ec_ghz << ',';
    if (r.q.unbounded)
      csv << "unbounded,unbounded\n";
    else
      csv << r.q.value << ',' << r.t1_us << '\n';
    rows.push_back(row);
  }
  t.json = {{"reference", names.front()}, {"rows", rows}};
  t.csv = csv.str();

  std::ostringstream conv;
  conv.precision(10);
  conv << "run,nfe,best_ppm\n";
  for (std::size_t k = 0; k < run_dirs.size(); ++k) {
    std::ifstream in(fs::path(run_dirs[k]) / "trace.csv");
    if (!in) continue;
    std::string line;
    std::getline(in, line);
    // column positions from the header
    std::vector<std::string> head;
    std::stringstream hs(line);
    for (std::string c; std::getline(hs, c, ',');) head.push_back(c);
    const auto col = [&](const std::string& name) {
      for (std::size_t i = 0; i < head.size(); ++i)
        if (head[i] == name) return static_cast<long>(i);
      return -1L;
    };
    const long nfe_col = col("nfe"), best_col = col("best");
    if (nfe_col < 0 || best_col < 0) continue;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::stringstream ls(line);
      for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
      if (static_cast<long>(cells.size()) <= best_col) continue;
      conv << names[k] << ',' << cells[static_cast<std::size_t>(nfe_col)] << ','
           << cells[static_cast<std::size_t>(best_col)] << '\n';
    }
  }
  t.convergence_csv = conv.str();
  return t;
}

void write_report(const std::vector<std::string>& run_dirs, const std::string& out_dir, bool force) {
  const ComparisonTable t = compare_runs(run_dirs, force);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create " + out_dir);
  write_json(fs::path(out_dir) / "comparison.json", t.json);
  std::ofstream(fs::path(out_dir) / "comparison.csv") << t.csv;
  std::ofstream(fs::path(out_dir) / "convergence.csv") << t.convergence_csv;
}

}  // namespace tlsopt
