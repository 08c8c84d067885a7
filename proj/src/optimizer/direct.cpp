#include "tlsopt/optimizer/direct.hpp"

#include "tlsopt/error.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

namespace tlsopt {
namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

double number_from(const nlohmann::json& j, double fallback) { return j.is_null() ? fallback : j.get<double>(); }

nlohmann::json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Termination termination_from_string(const std::string& s) {
  for (auto t : {Termination::Continue, Termination::MaxNfe, Termination::MaxIterations, Termination::Dynamic})
    if (to_string(t) == s) return t;
  throw ConfigError("unknown termination reason '" + s + "'");
}

}  // namespace

DesignSpace::DesignSpace(Eigen::VectorXd lo, Eigen::VectorXd hi, std::vector<std::string> n)
    : lower(std::move(lo)), upper(std::move(hi)), names(std::move(n)) {
  if (names.empty())
    for (Eigen::Index i = 0; i < lower.size(); ++i) names.push_back("x" + std::to_string(i));
  validate();
}

void DesignSpace::validate() const {
  if (lower.size() == 0) throw ConfigError("design space has no variables");
  if (lower.size() != upper.size()) throw ConfigError("design bounds differ in length");
  if (static_cast<Eigen::Index>(names.size()) != lower.size()) throw ConfigError("design variable names do not match bounds");
  for (Eigen::Index i = 0; i < lower.size(); ++i)
    if (!std::isfinite(lower(i)) || !std::isfinite(upper(i)) || lower(i) > upper(i))
      throw ConfigError("invalid bounds for " + names[i]);
}

Eigen::VectorXd DesignSpace::normalize(const Eigen::VectorXd& x) const {
  const Eigen::ArrayXd w = (upper - lower).array();
  return (w > 0.0).select((x - lower).array() / w, 0.5).matrix();
}

Eigen::VectorXd DesignSpace::denormalize(const Eigen::VectorXd& u) const {
  return (lower.array() + u.array() * (upper - lower).array()).matrix();
}

double third_power(int k) {
  static const std::array<double, 64> table = [] {
    std::array<double, 64> t{};
    t[0] = 1.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] / 3.0;
    return t;
  }();
  if (k < 0 || k >= static_cast<int>(table.size())) throw SolverError("hyperrectangle refined beyond 3^-63");
  return table[static_cast<std::size_t>(k)];
}

double Hyperrectangle::size() const {
  // sorted so equal level multisets give bit-identical sizes
  std::vector<int> l(level.data(), level.data() + level.size());
  std::sort(l.begin(), l.end());
  double acc = 0.0;
  for (int k : l) acc += third_power(k) * third_power(k);
  return 0.5 * std::sqrt(acc);
}

double Hyperrectangle::volume() const {
  double v = 1.0;
  for (Eigen::Index i = 0; i < level.size(); ++i) v *= third_power(level(i));
  return v;
}

void TerminationConfig::validate() const {
  if (max_nfe < 1) throw ConfigError("max_nfe must be >= 1");
  if (max_iterations && *max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("termination tolerances must be > 0");
  if (window < 1) throw ConfigError("termination window must be >= 1");
  if (!(epsilon >= 0.0)) throw ConfigError("DIRECT epsilon must be >= 0");
  if (!(sentinel_floor > 0.0)) throw ConfigError("sentinel floor must be > 0");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Continue: return "continue";
    case Termination::MaxNfe: return "max_nfe";
    case Termination::MaxIterations: return "max_iterations";
    case Termination::Dynamic: return "dynamic";
  }
  return "continue";
}

std::vector<std::size_t> potentially_optimal(const std::vector<double>& d, const std::vector<double>& f,
                                             double epsilon) {
  if (d.size() != f.size()) throw ConfigError("size and value lists differ in length");
  if (d.empty()) return {};
  const double fmin = *std::min_element(f.begin(), f.end());
  // lowest value per size class
  std::map<double, double> classes;
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto [it, fresh] = classes.emplace(d[i], f[i]);
    if (!fresh) it->second = std::min(it->second, f[i]);
  }
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (f[j] > classes.at(d[j])) continue;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& [dc, fc] : classes) {
      if (dc < d[j])
        lo = std::max(lo, (f[j] - fc) / (d[j] - dc));
      else if (dc > d[j])
        hi = std::min(hi, (fc - f[j]) / (dc - d[j]));
    }
    if (d[j] > 0.0) lo = std::max(lo, (f[j] - fmin + epsilon * std::abs(fmin)) / d[j]);
    if (hi > 0.0 && lo <= hi) out.push_back(j);
  }
  return out;
}

double OptimizerState::total_volume() const {
  double v = 0.0;
  for (const auto& r : rects) v += r.volume();
  return v;
}

std::vector<std::size_t> OptimizerState::potentially_optimal(double epsilon) const {
  std::vector<double> d, f;
  d.reserve(rects.size());
  f.reserve(rects.size());
  for (const auto& r : rects) {
    d.push_back(r.size());
    f.push_back(r.f);
  }
  return tlsopt::potentially_optimal(d, f, epsilon);
}

bool dynamic_converged(const std::vector<double>& f_current, const TerminationConfig& config) {
  const auto w = static_cast<std::size_t>(config.window);
  if (f_current.size() < w) return false;
  const double mean = std::accumulate(f_current.end() - static_cast<long>(w), f_current.end(), 0.0) / static_cast<double>(w);
  const double diff = std::abs(f_current.back() - mean);
  const double rel = mean != 0.0 ? diff / std::abs(mean) : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  const bool a = rel <= config.rel_tol;
  const bool b = diff <= config.abs_tol;
  return config.require_both ? (a && b) : (a || b);
}

Termination check_termination(const OptimizerState& state, const TerminationConfig& config) {
  // samples come in pairs, so a single leftover evaluation cannot be spent
  if (config.max_nfe - state.nfe < 2) return Termination::MaxNfe;
  if (config.max_iterations && state.iteration >= *config.max_iterations) return Termination::MaxIterations;
  if (config.dynamic) {
    std::vector<double> seq;
    seq.reserve(state.iterations.size());
    for (const auto& it : state.iterations) seq.push_back(it.f_current);
    if (dynamic_converged(seq, config)) return Termination::Dynamic;
  }
  return Termination::Continue;
}

double sentinel_value(double max_finite, double floor) {
  return max_finite > 0.0 ? std::max(10.0 * max_finite, floor) : floor;
}

DirectOptimizer::DirectOptimizer(DesignSpace space, Objective objective, TerminationConfig config)
    : space_(std::move(space)), objective_(std::move(objective)), config_(config) {
  space_.validate();
  config_.validate();
  if (!objective_) throw ConfigError("no objective function");
  clock_origin_ = now_seconds();
}

double DirectOptimizer::evaluate(const Eigen::VectorXd& u, Evaluation& out, bool& sentinel) {
  const Eigen::VectorXd x = space_.denormalize(u);
  sentinel = false;
  try {
    out = objective_(x);
    if (!out.feasible || !std::isfinite(out.value())) sentinel = true;
  } catch (const InfeasibleGeometry& e) {
    out = Evaluation{};
    out.feasible = false;
    out.note = e.what();
    sentinel = true;
  } catch (const MeshError& e) {
    out = Evaluation{};
    out.feasible = false;
    out.note = e.what();
    sentinel = true;
  } catch (const SolverError& e) {
    out = Evaluation{};
    out.feasible = false;
    out.note = e.what();
    sentinel = true;
  } catch (const NoSolution& e) {
    out = Evaluation{};
    out.feasible = false;
    out.note = e.what();
    sentinel = true;
  }
  double value = out.value();
  if (sentinel) {
    value = sentinel_value(state_.max_finite, config_.sentinel_floor);
    ++state_.sentinels;
    spdlog::debug("sample {} infeasible ({}); sentinel {}", state_.nfe + 1, out.note, value);
  } else {
    state_.max_finite = std::max(state_.max_finite, value);
  }
  ++state_.nfe;

  TraceRow row;
  row.nfe = state_.nfe;
  row.iteration = state_.iteration;
  row.x = x;
  row.eval = out;
  row.value = value;
  row.sentinel = sentinel;
  const double prev = state_.trace.empty() ? value : state_.trace.back().best;
  row.best = std::min(prev, value);
  row.wall_seconds = now_seconds() - clock_origin_;
  state_.trace.push_back(std::move(row));

  if (state_.nfe >= 10 && 2 * state_.sentinels > state_.nfe)
    throw OptimizationAborted(std::to_string(state_.sentinels) + " of " + std::to_string(state_.nfe) +
                              " evaluations failed; last: " + out.note);
  return value;
}

void DirectOptimizer::initialize() {
  if (!state_.rects.empty()) return;
  Hyperrectangle r;
  r.center = Eigen::VectorXd::Constant(space_.dimension(), 0.5);
  r.level = Eigen::VectorXi::Zero(space_.dimension());
  Evaluation e;
  bool sentinel = false;
  r.f = evaluate(r.center, e, sentinel);
  r.id = state_.next_id++;
  r.trace_index = 0;
  state_.rects.push_back(r);
  state_.best = 0;
}

long DirectOptimizer::trisect(std::size_t index, long budget) {
  const Hyperrectangle parent = state_.rects.at(index);
  const int lmin = parent.min_level();
  std::vector<Eigen::Index> dims;
  for (Eigen::Index i = 0; i < parent.level.size(); ++i)
    if (parent.level(i) == lmin) dims.push_back(i);
  const auto fit = static_cast<std::size_t>(std::max(0L, budget / 2));
  if (dims.size() > fit) dims.resize(fit);
  if (dims.empty()) return 0;

  const double offset = third_power(lmin + 1);
  struct Sample {
    Eigen::Index dim;
    Eigen::VectorXd u[2];
    double f[2];
    long row[2];
  };
  std::vector<Sample> samples;
  for (Eigen::Index i : dims) {
    Sample s;
    s.dim = i;
    for (int side = 0; side < 2; ++side) {
      s.u[side] = parent.center;
      s.u[side](i) += side == 0 ? -offset : offset;
      Evaluation e;
      bool sentinel = false;
      s.f[side] = evaluate(s.u[side], e, sentinel);
      s.row[side] = static_cast<long>(state_.trace.size()) - 1;
    }
    samples.push_back(std::move(s));
  }
  // divide the best direction first; ties go to the lower index
  std::stable_sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
    return std::min(a.f[0], a.f[1]) < std::min(b.f[0], b.f[1]);
  });

  Eigen::VectorXi level = parent.level;
  for (const auto& s : samples) {
    ++level(s.dim);
    for (int side = 0; side < 2; ++side) {
      Hyperrectangle child;
      child.center = s.u[side];
      child.level = level;
      child.f = s.f[side];
      child.id = state_.next_id++;
      child.trace_index = s.row[side];
      state_.rects.push_back(std::move(child));
    }
  }
  state_.rects[index].level = level;

  for (std::size_t k = 0; k < state_.rects.size(); ++k)
    if (state_.rects[k].f < state_.rects[state_.best].f) state_.best = k;
  return static_cast<long>(2 * samples.size());
}

Termination DirectOptimizer::step() {
  initialize();
  if (state_.reason != Termination::Continue) return state_.reason;
  const std::vector<std::size_t> po = state_.potentially_optimal(config_.epsilon);
  double f_current = std::numeric_limits<double>::infinity();
  for (std::size_t k : po) f_current = std::min(f_current, state_.rects[k].f);

  ++state_.iteration;
  for (std::size_t k : po) {
    const long remaining = config_.max_nfe - state_.nfe;
    if (remaining < 2) break;
    trisect(k, remaining);
  }

  IterationRecord rec;
  rec.iteration = state_.iteration;
  rec.nfe = state_.nfe;
  rec.f_current = f_current;
  rec.best = state_.best_value();
  rec.selected = po.size();
  state_.iterations.push_back(rec);
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(config_.window), state_.iterations.size());
  double mean = 0.0;
  for (std::size_t k = state_.iterations.size() - w; k < state_.iterations.size(); ++k) mean += state_.iterations[k].f_current;
  state_.iterations.back().f_mean = mean / static_cast<double>(w);

  state_.reason = check_termination(state_, config_);
  spdlog::debug("iteration {}: nfe {} selected {} f_current {:.6g} best {:.6g}", rec.iteration, rec.nfe, rec.selected,
                f_current, rec.best);
  return state_.reason;
}

OptimizationResult DirectOptimizer::run(const std::function<void(const DirectOptimizer&)>& on_iteration) {
  initialize();
  if (state_.reason == Termination::Continue && config_.max_nfe - state_.nfe < 2) state_.reason = Termination::MaxNfe;
  while (state_.reason == Termination::Continue) {
    step();
    if (on_iteration) on_iteration(*this);
  }
  return result();
}

OptimizationResult DirectOptimizer::result() const {
  OptimizationResult r;
  if (state_.rects.empty()) return r;
  const Hyperrectangle& b = state_.rects[state_.best];
  r.best_x = space_.denormalize(b.center);
  r.best_value = b.f;
  r.best_eval = state_.trace.at(static_cast<std::size_t>(b.trace_index)).eval;
  r.nfe = state_.nfe;
  r.iterations = state_.iteration;
  r.reason = state_.reason;
  r.trace = state_.trace;
  r.iteration_log = state_.iterations;
  return r;
}

nlohmann::json DirectOptimizer::checkpoint() const {
  using nlohmann::json;
  json j;
  j["version"] = kCheckpointVersion;
  j["space"] = {{"lower", vector_json(space_.lower)}, {"upper", vector_json(space_.upper)}, {"names", space_.names}};
  json c = {{"max_nfe", config_.max_nfe},       {"rel_tol", config_.rel_tol},
            {"abs_tol", config_.abs_tol},       {"window", config_.window},
            {"epsilon", config_.epsilon},       {"dynamic", config_.dynamic},
            {"require_both", config_.require_both}, {"sentinel_floor", config_.sentinel_floor}};
  c["max_iterations"] = config_.max_iterations ? json(*config_.max_iterations) : json(nullptr);
  j["termination"] = c;
  json rects = json::array();
  for (const auto& r : state_.rects) {
    std::vector<int> lv(r.level.data(), r.level.data() + r.level.size());
    rects.push_back({{"center", vector_json(r.center)}, {"level", lv}, {"f", r.f}, {"id", r.id}, {"row", r.trace_index}});
  }
  json iters = json::array();
  for (const auto& it : state_.iterations)
    iters.push_back({{"iteration", it.iteration}, {"nfe", it.nfe}, {"f_current", it.f_current},
                     {"f_mean", it.f_mean}, {"best", it.best}, {"selected", it.selected}});
  json trace = json::array();
  for (const auto& t : state_.trace)
    trace.push_back({{"nfe", t.nfe},
                     {"iteration", t.iteration},
                     {"x", vector_json(t.x)},
                     {"raw", number_or_null(t.eval.raw)},
                     {"penalty", number_or_null(t.eval.penalty)},
                     {"ec_ghz", number_or_null(t.eval.ec_ghz)},
                     {"feasible", t.eval.feasible},
                     {"note", t.eval.note},
                     {"value", t.value},
                     {"sentinel", t.sentinel},
                     {"best", t.best},
                     {"wall_seconds", t.wall_seconds}});
  j["state"] = {{"rects", rects},
                {"nfe", state_.nfe},
                {"iteration", state_.iteration},
                {"next_id", state_.next_id},
                {"best", state_.best},
                {"iterations", iters},
                {"trace", trace},
                {"sentinels", state_.sentinels},
                {"max_finite", number_or_null(state_.max_finite)},
                {"reason", to_string(state_.reason)}};
  return j;
}

DirectOptimizer DirectOptimizer::resume(const nlohmann::json& j, Objective objective) {
  if (j.value("version", 0) != kCheckpointVersion) throw ConfigError("unsupported checkpoint version");
  const auto& sp = j.at("space");
  DesignSpace space(vector_from(sp.at("lower")), vector_from(sp.at("upper")),
                    sp.at("names").get<std::vector<std::string>>());
  const auto& c = j.at("termination");
  TerminationConfig cfg;
  cfg.max_nfe = c.at("max_nfe").get<long>();
  cfg.rel_tol = c.at("rel_tol").get<double>();
  cfg.abs_tol = c.at("abs_tol").get<double>();
  cfg.window = c.at("window").get<int>();
  cfg.epsilon = c.at("epsilon").get<double>();
  cfg.dynamic = c.at("dynamic").get<bool>();
  cfg.require_both = c.at("require_both").get<bool>();
  cfg.sentinel_floor = c.at("sentinel_floor").get<double>();
  if (!c.at("max_iterations").is_null()) cfg.max_iterations = c.at("max_iterations").get<long>();

  DirectOptimizer opt(std::move(space), std::move(objective), cfg);
  const auto& s = j.at("state");
  auto& st = opt.state_;
  for (const auto& r : s.at("rects")) {
    Hyperrectangle h;
    h.center = vector_from(r.at("center"));
    const auto lv = r.at("level").get<std::vector<int>>();
    h.level = Eigen::Map<const Eigen::VectorXi>(lv.data(), static_cast<Eigen::Index>(lv.size()));
    h.f = r.at("f").get<double>();
    h.id = r.at("id").get<long>();
    h.trace_index = r.at("row").get<long>();
    st.rects.push_back(std::move(h));
  }
  st.nfe = s.at("nfe").get<long>();
  st.iteration = s.at("iteration").get<int>();
  st.next_id = s.at("next_id").get<long>();
  st.best = s.at("best").get<std::size_t>();
  for (const auto& it : s.at("iterations")) {
    IterationRecord rec;
    rec.iteration = it.at("iteration").get<int>();
    rec.nfe = it.at("nfe").get<long>();
    rec.f_current = it.at("f_current").get<double>();
    rec.f_mean = it.at("f_mean").get<double>();
    rec.best = it.at("best").get<double>();
    rec.selected = it.at("selected").get<std::size_t>();
    st.iterations.push_back(rec);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double last_wall = 0.0;
  for (const auto& t : s.at("trace")) {
    TraceRow row;
    row.nfe = t.at("nfe").get<long>();
    row.iteration = t.at("iteration").get<int>();
    row.x = vector_from(t.at("x"));
    row.eval.raw = number_from(t.at("raw"), nan);
    row.eval.penalty = number_from(t.at("penalty"), nan);
    row.eval.ec_ghz = number_from(t.at("ec_ghz"), nan);
    row.eval.feasible = t.at("feasible").get<bool>();
    row.eval.note = t.at("note").get<std::string>();
    row.value = t.at("value").get<double>();
    row.sentinel = t.at("sentinel").get<bool>();
    row.best = t.at("best").get<double>();
    row.wall_seconds = t.at("wall_seconds").get<double>();
    last_wall = row.wall_seconds;
    st.trace.push_back(std::move(row));
  }
  st.sentinels = s.at("sentinels").get<long>();
  st.max_finite = number_from(s.at("max_finite"), -std::numeric_limits<double>::infinity());
  st.reason = termination_from_string(s.at("reason").get<std::string>());
  if (st.trace.size() != static_cast<std::size_t>(st.nfe)) throw ConfigError("checkpoint trace length differs from NFE");
  opt.clock_origin_ = now_seconds() - last_wall;
  return opt;
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace, const DesignSpace& space,
                     double value_scale) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out.precision(17);
  out << "nfe,iteration";
  for (const auto& n : space.names) out << ',' << n;
  out << ",raw,penalty,value,best,ec_ghz,sentinel,wall_seconds\n";
  const auto num = [&](double v, double scale) {
    if (std::isfinite(v)) out << v * scale;
  };
  for (const auto& t : trace) {
    out << t.nfe << ',' << t.iteration;
    for (Eigen::Index i = 0; i < t.x.size(); ++i) out << ',' << t.x(i);
    out << ',';
    if (t.eval.feasible) num(t.eval.raw, value_scale);
    out << ',';
    if (t.eval.feasible) num(t.eval.penalty, value_scale);
    out << ',';
    num(t.value, value_scale);
    out << ',';
    num(t.best, value_scale);
    out << ',';
    num(t.eval.ec_ghz, 1.0);
    out << ',' << (t.sentinel ? 1 : 0) << ',';
    out.precision(6);
    out << t.wall_seconds << '\n';
    out.precision(17);
  }
}

}  // namespace tlsopt
