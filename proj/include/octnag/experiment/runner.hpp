#pragma once
//
// End-to-end experiment execution: integrate (or iterate a baseline),
// compute regrets, write CSV/JSON/SVG artifacts and evaluate declared checks.
//
// Exit codes: 0 success, 1 a declared check failed, 2 configuration or
// numerical error (recorded in summary.json).

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "octnag/baselines.hpp"
#include "octnag/dynamics.hpp"
#include "octnag/experiment/config.hpp"
#include "octnag/experiment/csv.hpp"
#include "octnag/experiment/plots.hpp"
#include "octnag/integrator.hpp"
#include "octnag/regret.hpp"

namespace octnag::experiment {

inline constexpr const char* kLibraryVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitError = 2 };

struct RunOutcome {
  int exit_code = kExitOk;
  json summary;
  std::vector<std::string> files;
};

// Everything the checks may look at, extracted from a finished run.
struct RunData {
  int agents = 1;
  int dim = 1;
  std::vector<double> times;
  Matrix positions;                             // samples x (agents * dim)
  Matrix xstar;                                 // samples x dim
  std::vector<double> dynamic_gap;              // per sample
  std::map<double, std::vector<double>> static_gap;  // horizon -> per sample (NaN past T)
  std::vector<double> disagreement;             // max pairwise distance, distributed only
  std::map<std::string, std::map<double, double>> regrets;  // kind -> T -> value
  // baseline runs
  std::vector<double> per_step_gap;
  Matrix iterates;
  double radius = 0.0;
};

namespace runner_detail {

inline json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline json stats_json(const SolverStats& s, Method method, std::size_t samples) {
  return {{"method", to_string(method)},
          {"accepted_steps", s.accepted_steps},
          {"rejected_steps", s.rejected_steps},
          {"rhs_evaluations", s.rhs_evaluations},
          {"min_step", std::isfinite(s.min_step) ? json(s.min_step) : json(nullptr)},
          {"max_step", s.max_step},
          {"samples", samples}};
}

inline std::string horizon_tag(double T) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", T);
  return buf;
}

inline double window_max(const std::vector<double>& times, const std::vector<double>& values, double a, double b) {
  double out = -INFINITY;
  for (std::size_t k = 0; k < times.size() && k < values.size(); ++k) {
    if (times[k] >= a - 1e-12 && times[k] <= b + 1e-12 && std::isfinite(values[k])) {
      out = std::max(out, values[k]);
    }
  }
  return out;
}

inline std::pair<double, double> window(const json& check, const char* key) {
  if (!check.contains(key) || !check.at(key).is_array() || check.at(key).size() != 2) {
    config_error(std::string("checks.") + key, "must be [start, end]");
  }
  return {check.at(key)[0].get<double>(), check.at(key)[1].get<double>()};
}

inline double param(const json& check, const char* key, std::optional<double> fallback = {}) {
  if (!check.contains(key)) {
    if (fallback) return *fallback;
    config_error(std::string("checks.") + key, "is required");
  }
  if (!check.at(key).is_number()) config_error(std::string("checks.") + key, "must be a number");
  return check.at(key).get<double>();
}

inline double regret_at(const RunData& data, const std::string& kind, double T) {
  const auto it = data.regrets.find(kind);
  if (it == data.regrets.end()) config_error("checks.regret", "regret '" + kind + "' was not computed");
  const auto jt = it->second.find(T);
  if (jt == it->second.end()) config_error("checks.T", "horizon " + horizon_tag(T) + " not in horizons");
  return jt->second;
}

}  // namespace runner_detail

// Evaluates one declared check; returns the check record with "passed".
inline json evaluate_check(const json& check, const RunData& data) {
  using namespace runner_detail;
  if (!check.is_object() || !check.contains("kind") || !check.at("kind").is_string()) {
    config_error("checks.kind", "each check needs a string kind");
  }
  const std::string kind = check.at("kind").get<std::string>();
  json rec = check;
  bool passed = false;

  if (kind == "regret_at_most") {
    const std::string which = check.value("regret", std::string("static"));
    const double limit = param(check, "max");
    const auto it = data.regrets.find(which);
    if (it == data.regrets.end()) config_error("checks.regret", "regret '" + which + "' was not computed");
    double worst = -INFINITY;
    for (const auto& [T, v] : it->second) worst = std::max(worst, v);
    rec["observed_max"] = worst;
    passed = worst <= limit;
  } else if (kind == "regret_growth_at_most") {
    // value(T_large)/T_large^e <= factor * value(T_small)/T_small^e
    const std::string which = check.value("regret", std::string("dynamic"));
    const double Ts = param(check, "T_small"), Tl = param(check, "T_large");
    const double e = param(check, "exponent", 1.0), factor = param(check, "factor");
    const double small = regret_at(data, which, Ts) / std::pow(Ts, e);
    const double large = regret_at(data, which, Tl) / std::pow(Tl, e);
    rec["observed_small"] = small;
    rec["observed_large"] = large;
    passed = large <= factor * small;
  } else if (kind == "gap_at_most") {
    const double T = param(check, "T"), from = param(check, "from", 0.0), limit = param(check, "max");
    const auto it = data.static_gap.find(T);
    if (it == data.static_gap.end()) config_error("checks.T", "no static gap for horizon " + horizon_tag(T));
    const double worst = window_max(data.times, it->second, from, T);
    rec["observed_max"] = worst;
    passed = worst <= limit;
  } else if (kind == "gap_envelope_decreasing") {
    const auto [a, b] = window(check, "early");
    const auto [c, d] = window(check, "late");
    std::vector<double> abs_gap(data.dynamic_gap.size());
    std::transform(data.dynamic_gap.begin(), data.dynamic_gap.end(), abs_gap.begin(),
                   [](double g) { return std::abs(g); });
    const double early = window_max(data.times, abs_gap, a, b);
    const double late = window_max(data.times, abs_gap, c, d);
    rec["observed_early"] = early;
    rec["observed_late"] = late;
    passed = late < early;
  } else if (kind == "tracking_improves") {
    const int coord = static_cast<int>(param(check, "coordinate", double(data.dim - 1)));
    if (coord < 0 || coord >= data.dim) config_error("checks.coordinate", "outside the decision dimension");
    const auto [a, b] = window(check, "early");
    const auto [c, d] = window(check, "late");
    std::vector<double> err(data.times.size());
    for (std::size_t k = 0; k < err.size(); ++k) {
      double e = 0.0;
      for (int j = 0; j < data.agents; ++j) {
        e = std::max(e, std::abs(data.positions(Eigen::Index(k), j * data.dim + coord) - data.xstar(Eigen::Index(k), coord)));
      }
      err[k] = e;
    }
    const double early = window_max(data.times, err, a, b);
    const double late = window_max(data.times, err, c, d);
    rec["observed_early"] = early;
    rec["observed_late"] = late;
    passed = late < early;
  } else if (kind == "consensus_contracts") {
    if (data.disagreement.empty()) config_error("checks.kind", "consensus_contracts needs a distributed run");
    const double t = param(check, "t"), ratio = param(check, "ratio");
    const auto it = std::lower_bound(data.times.begin(), data.times.end(), t - 1e-9);
    if (it == data.times.end()) config_error("checks.t", "after the end of the run");
    const double at_t = data.disagreement[std::size_t(it - data.times.begin())];
    rec["observed_ratio"] = data.disagreement.front() > 0.0 ? at_t / data.disagreement.front() : 0.0;
    passed = at_t <= ratio * data.disagreement.front();
  } else if (kind == "baseline_gap_below") {
    if (data.per_step_gap.empty()) config_error("checks.kind", "baseline_gap_below needs a baseline run");
    const auto after = static_cast<std::size_t>(param(check, "after_step", 0.0));
    const double limit = param(check, "max");
    double worst = -INFINITY;
    for (std::size_t k = after + 1; k < data.per_step_gap.size(); ++k) worst = std::max(worst, data.per_step_gap[k]);
    rec["observed_max"] = worst;
    passed = worst < limit;
  } else if (kind == "inside_ball") {
    if (data.iterates.size() == 0) config_error("checks.kind", "inside_ball needs a baseline run");
    const double tol = param(check, "tol", 1e-12);
    const double worst = data.iterates.rowwise().norm().maxCoeff();
    rec["observed_max_norm"] = worst;
    passed = worst <= data.radius * (1.0 + tol);
  } else {
    config_error("checks.kind", "unknown check '" + kind + "'");
  }
  rec["passed"] = passed;
  return rec;
}

namespace runner_detail {

inline void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
}

inline std::vector<std::string> indexed(const std::string& prefix, int count) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

inline Vector initial_state(const ExperimentConfig& cfg) {
  const Vector x = detail::to_vector(cfg.initial_x);
  if (cfg.dynamics == "gradient_flow") return x;
  return stack_state(x, detail::to_vector(cfg.initial_v));
}

// Continuous-time runs (centralized or distributed).
inline void run_continuous(const ExperimentConfig& cfg, const std::filesystem::path& dir, RunOutcome& outcome,
                           RunData& data) {
  const int n = decision_dim(cfg);
  const int agents = agent_count(cfg);
  const int positions = n * agents;
  data.agents = agents;
  data.dim = n;

  const TimeVaryingObjective global = build_objective(cfg.objective);
  std::optional<DistributedConfig> dist;
  RhsFn rhs;
  if (cfg.mode == Mode::Distributed) {
    dist = build_distributed(cfg);
    rhs = doct_nag_rhs(build_schedule(cfg.schedule), *dist);
  } else if (cfg.dynamics == "gradient_flow") {
    const GradientGain gain = cfg.gain.kind == "constant" ? GradientGain::constant(cfg.gain.c)
                                                          : GradientGain::hyperbolic(cfg.gain.c);
    rhs = gradient_flow_rhs(gain, global);
  } else {
    rhs = oct_nag_rhs(build_schedule(cfg.schedule), global);
  }

  const OdeProblem problem{rhs, cfg.solver.t0, cfg.solver.t_end, initial_state(cfg)};
  const Trajectory traj = integrate(problem, build_solver(cfg.solver));
  outcome.summary["solver_stats"] = stats_json(traj.stats, traj.method, traj.size());

  data.times = traj.times;
  data.positions = traj.states.leftCols(positions);

  // trajectory.csv
  {
    std::vector<std::string> header{"t"};
    for (auto& h : indexed("x_", positions)) header.push_back(h);
    if (cfg.dynamics != "gradient_flow") {
      for (auto& h : indexed("v_", positions)) header.push_back(h);
    }
    CsvWriter w(dir / "trajectory.csv", header);
    std::vector<double> row(std::size_t(traj.states.cols()) + 1);
    for (std::size_t k = 0; k < traj.size(); k += std::size_t(cfg.trajectory_stride)) {
      row[0] = traj.times[k];
      for (Eigen::Index c = 0; c < traj.states.cols(); ++c) row[std::size_t(c) + 1] = traj.states(Eigen::Index(k), c);
      w.write_numbers(row);
    }
    outcome.files.push_back("trajectory.csv");
  }

  const CostModel model = dist ? distributed_cost(*dist) : centralized_cost(global);
  const std::string static_kind = to_string(model.static_kind);
  const std::string dynamic_kind = to_string(model.dynamic_kind);

  // Instantaneous comparators over every sample.
  const auto sweep = dynamic_sweep(global, traj.times, Vector::Zero(n), cfg.comparator_tol);
  data.xstar.resize(Eigen::Index(traj.size()), n);
  std::vector<Vector> sweep_points;
  for (std::size_t k = 0; k < sweep.size(); ++k) {
    data.xstar.row(Eigen::Index(k)) = sweep[k].point.transpose();
    sweep_points.push_back(sweep[k].point);
  }
  data.dynamic_gap = gap_series(traj, model, sweep_points);

  const bool want_static = std::find(cfg.regrets.begin(), cfg.regrets.end(), "static") != cfg.regrets.end();
  const bool want_dynamic = std::find(cfg.regrets.begin(), cfg.regrets.end(), "dynamic") != cfg.regrets.end();

  json regrets = json::array();
  std::vector<std::string> header{"T", "kind", "value"};
  for (auto& h : indexed("comparator_", n)) header.push_back(h);
  header.push_back("grad_norm");
  CsvWriter regret_csv(dir / "regret.csv", header);
  auto regret_row = [&](double T, const std::string& kind, double value, const Vector& point, double grad_norm) {
    std::vector<std::string> cells{format_double(T), kind, format_double(value)};
    for (Eigen::Index i = 0; i < point.size(); ++i) cells.push_back(format_double(point(i)));
    cells.push_back(format_double(grad_norm));
    regret_csv.write_row(cells);
  };

  if (want_static) {
    const RegretReport rep = static_regret(traj, model, cfg.horizons, cfg.comparator_tol);
    for (std::size_t i = 0; i < rep.values.size(); ++i) {
      const ComparatorRecord& c = rep.comparators[i];
      const double T = rep.horizon_grid[i];
      regret_row(T, static_kind, rep.values[i], c.point, c.grad_norm);
      regrets.push_back({{"kind", static_kind},
                         {"T", T},
                         {"value", rep.values[i]},
                         {"quadrature_error", rep.quadrature_error[i]},
                         {"comparator", vec_json(c.point)},
                         {"grad_norm", c.grad_norm},
                         {"comparator_iterations", c.iterations}});
      data.regrets[static_kind][T] = rep.values[i];
      std::vector<double> g = gap_series(traj, model, {c.point});
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (traj.times[k] > T + 1e-9 * (traj.times.back() - traj.times.front())) g[k] = NAN;
      }
      data.static_gap[T] = std::move(g);
    }
  }
  if (want_dynamic) {
    const RegretReport rep = dynamic_regret(traj, model, cfg.horizons, cfg.comparator_tol);
    for (std::size_t i = 0; i < rep.values.size(); ++i) {
      const double T = rep.horizon_grid[i];
      // comparator column: x*_T at the last sample not after T; grad_norm: worst sweep residual up to T
      std::size_t last = 0;
      double worst = 0.0;
      for (std::size_t k = 0; k < rep.comparators.size() && traj.times[k] <= T + 1e-9; ++k) {
        last = k;
        worst = std::max(worst, rep.comparators[k].grad_norm);
      }
      regret_row(T, dynamic_kind, rep.values[i], rep.comparators[last].point, worst);
      regrets.push_back({{"kind", dynamic_kind},
                         {"T", T},
                         {"value", rep.values[i]},
                         {"quadrature_error", rep.quadrature_error[i]},
                         {"comparator", vec_json(rep.comparators[last].point)},
                         {"grad_norm", worst}});
      data.regrets[dynamic_kind][T] = rep.values[i];
    }
  }
  outcome.files.push_back("regret.csv");
  outcome.summary["regrets"] = regrets;

  if (dist) {
    data.disagreement.resize(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
      double worst = 0.0;
      for (int i = 0; i < agents; ++i) {
        for (int j = i + 1; j < agents; ++j) {
          worst = std::max(worst, (traj.states.row(Eigen::Index(k)).segment(Eigen::Index(i) * n, n) -
                                   traj.states.row(Eigen::Index(k)).segment(Eigen::Index(j) * n, n))
                                      .norm());
        }
      }
      data.disagreement[k] = worst;
    }
  }

  // gap.csv
  {
    std::vector<std::string> gh{"t", "dynamic_gap"};
    for (const auto& [T, g] : data.static_gap) gh.push_back("static_gap_T" + horizon_tag(T));
    if (dist) gh.push_back("max_disagreement");
    for (auto& h : indexed("xstar_", n)) gh.push_back(h);
    CsvWriter w(dir / "gap.csv", gh);
    for (std::size_t k = 0; k < traj.size(); k += std::size_t(cfg.trajectory_stride)) {
      std::vector<double> row{traj.times[k], data.dynamic_gap[k]};
      for (const auto& [T, g] : data.static_gap) row.push_back(g[k]);
      if (dist) row.push_back(data.disagreement[k]);
      for (int i = 0; i < n; ++i) row.push_back(data.xstar(Eigen::Index(k), i));
      w.write_numbers(row);
    }
    outcome.files.push_back("gap.csv");
  }
}

inline void run_baseline(const ExperimentConfig& cfg, const std::filesystem::path& dir, RunOutcome& outcome,
                         RunData& data) {
  const BaselineSpec& b = *cfg.baseline;
  const TimeVaryingObjective obj = build_objective(cfg.objective);
  const int n = obj.dim();
  DiscreteRunParams p;
  p.period = b.period;
  p.steps = b.steps;
  p.projection_radius = b.radius;
  p.comparator_tol = cfg.comparator_tol;
  p.x0 = cfg.initial_x.empty() ? Vector::Zero(n) : detail::to_vector(cfg.initial_x);
  if (p.x0.size() != n) config_error("initial.x", "must have " + std::to_string(n) + " entries");

  DiscreteRun run;
  if (b.algorithm == "ogd") {
    const StepRule rule = b.step_rule == "sqrt_decay"         ? StepRule::sqrt_decay(b.c)
                          : b.step_rule == "hyperbolic_decay" ? StepRule::hyperbolic_decay(b.c)
                                                              : StepRule::fixed(b.c);
    run = run_discrete_ogd(obj, rule, p);
  } else if (b.algorithm == "adagrad") {
    run = run_adagrad(obj, b.eta, p);
  } else {
    run = run_ftal(obj, b.beta, p);
  }
  const DiscreteRegrets r = discrete_regrets(run, obj, cfg.comparator_tol);

  data.dim = n;
  data.times = run.times;
  data.per_step_gap = run.per_step_gap;
  data.iterates = run.iterates;
  data.radius = b.radius;
  const double horizon = double(b.steps) * b.period;
  data.regrets["static"][horizon] = r.static_regret;
  data.regrets["dynamic"][horizon] = r.dynamic_regret;

  {
    std::vector<std::string> header{"k", "t_k"};
    for (auto& h : indexed("x_", n)) header.push_back(h);
    header.push_back("gap");
    CsvWriter w(dir / "iterates.csv", header);
    for (std::int64_t k = 0; k < run.steps; k += b.decimation) {
      std::vector<std::string> cells{std::to_string(k), format_double(run.times[std::size_t(k)])};
      for (int i = 0; i < n; ++i) cells.push_back(format_double(run.iterates(k, i)));
      cells.push_back(format_double(run.per_step_gap[std::size_t(k)]));
      w.write_row(cells);
    }
    outcome.files.push_back("iterates.csv");
  }
  {
    std::vector<std::string> header{"T", "kind", "value"};
    for (auto& h : indexed("comparator_", n)) header.push_back(h);
    header.push_back("grad_norm");
    CsvWriter w(dir / "regret.csv", header);
    std::vector<std::string> cells{format_double(horizon), "static", format_double(r.static_regret)};
    for (int i = 0; i < n; ++i) cells.push_back(format_double(r.offline.point(i)));
    cells.push_back(format_double(r.offline.grad_norm));
    w.write_row(cells);
    const Vector& last = run.dynamic_comparators.back();
    double worst = 0.0;
    for (std::size_t k = 0; k < run.times.size(); ++k) worst = std::max(worst, obj.gradient(run.times[k], run.dynamic_comparators[k]).norm());
    cells = {format_double(horizon), "dynamic", format_double(r.dynamic_regret)};
    for (int i = 0; i < n; ++i) cells.push_back(format_double(last(i)));
    cells.push_back(format_double(worst));
    w.write_row(cells);
    outcome.files.push_back("regret.csv");
  }
  double max_gap_late = -INFINITY;
  for (std::size_t k = 101; k < run.per_step_gap.size(); ++k) max_gap_late = std::max(max_gap_late, run.per_step_gap[k]);
  outcome.summary["regrets"] = json::array(
      {{{"kind", "static"}, {"T", horizon}, {"value", r.static_regret}, {"comparator", vec_json(r.offline.point)},
        {"grad_norm", r.offline.grad_norm}, {"sum_rule", "sum over sample times"}},
       {{"kind", "dynamic"}, {"T", horizon}, {"value", r.dynamic_regret}, {"sum_rule", "sum over sample times"}}});
  outcome.summary["baseline"] = {{"algorithm", run.algorithm},
                                 {"steps", run.steps},
                                 {"max_gap_after_step_100", std::isfinite(max_gap_late) ? json(max_gap_late) : json(nullptr)},
                                 {"max_iterate_norm", run.iterates.rowwise().norm().maxCoeff()}};
}

inline json recorded_defaults(const ExperimentConfig& cfg) {
  json d;
  d["comparator_tol"] = cfg.comparator_tol;
  if (cfg.mode == Mode::Baseline) {
    d["initial_point"] = cfg.initial_x.empty() ? "origin" : "configured";
    d["regret_rule"] = "sums over the sample times t_k = k * period";
    d["dynamic_comparator"] = "Newton on grad f_{t_k}, warm-started from the previous sample";
    return d;
  }
  d["T0"] = cfg.solver.t0;
  d["tolerances"] = {{"rel_tol", cfg.solver.rel_tol}, {"abs_tol", cfg.solver.abs_tol}};
  d["initial_state"] = {{"x", cfg.initial_x}, {"v", cfg.initial_v}};
  d["regret_quadrature"] = "composite trapezoid on the uniform sample grid";
  d["samples_per_unit_time"] = cfg.solver.samples_per_unit_time;
  if (cfg.network) {
    const Network net = build_network(*cfg.network);
    json edges = json::array();
    for (const Edge& e : net.edges()) edges.push_back({e.i, e.j, e.weight});
    d["topology"] = {{"n", net.n()}, {"edges", edges}};
  }
  return d;
}

}  // namespace runner_detail

// Runs a parsed config, writing artifacts into `dir` (created if missing).
inline RunOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  using namespace runner_detail;
  RunOutcome outcome;
  outcome.summary["name"] = cfg.name;
  outcome.summary["versions"] = {{"octnag", kLibraryVersion},
                                 {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                               "." + std::to_string(EIGEN_MINOR_VERSION)},
                                 {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                       std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                       std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  outcome.summary["config"] = to_json(cfg);
  outcome.summary["plot_meta"] = {{"agents", agent_count(cfg)}, {"dim", decision_dim(cfg)}, {"coordinate", cfg.plot_coordinate}};

  try {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
    outcome.summary["defaults"] = recorded_defaults(cfg);
    RunData data;
    if (cfg.mode == Mode::Baseline) {
      run_baseline(cfg, dir, outcome, data);
    } else {
      run_continuous(cfg, dir, outcome, data);
    }
    for (const auto& f : emit_plots(dir, cfg.plots, PlotMeta{agent_count(cfg), decision_dim(cfg), cfg.plot_coordinate})) outcome.files.push_back(f);

    json checks = json::array();
    bool all_passed = true;
    for (const auto& check : cfg.checks) {
      checks.push_back(evaluate_check(check, data));
      all_passed = all_passed && checks.back().at("passed").get<bool>();
    }
    outcome.summary["checks"] = checks;
    outcome.summary["status"] = all_passed ? "ok" : "check_failed";
    outcome.exit_code = all_passed ? kExitOk : kExitCheckFailed;
  } catch (const Error& e) {
    outcome.summary["status"] = "error";
    outcome.summary["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    outcome.exit_code = kExitError;
  }
  outcome.files.push_back("summary.json");
  outcome.summary["files"] = outcome.files;
  try {
    std::filesystem::create_directories(dir);
    write_json(dir / "summary.json", outcome.summary);
  } catch (const std::exception&) {
    outcome.exit_code = kExitError;
  }
  return outcome;
}

// Parses and runs a raw config document. Configuration errors still produce
// a summary.json (when the directory is writable) and exit code 2.
inline RunOutcome run_document(const json& doc, const std::filesystem::path& dir) {
  ExperimentConfig cfg;
  try {
    cfg = parse_config(doc);
  } catch (const Error& e) {
    RunOutcome outcome;
    outcome.exit_code = kExitError;
    outcome.summary = {{"name", doc.is_object() ? doc.value("name", std::string()) : std::string()},
                       {"versions", {{"octnag", kLibraryVersion}}},
                       {"config", doc},
                       {"status", "error"},
                       {"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}},
                       {"files", {"summary.json"}}};
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!ec) {
      try {
        runner_detail::write_json(dir / "summary.json", outcome.summary);
      } catch (const Error&) {
      }
    }
    return outcome;
  }
  return run_experiment(cfg, dir);
}

}  // namespace octnag::experiment
