#pragma once
//
// JSON experiment configuration: parsing with defaults, validation that
// names the offending field, dotted-path overrides, and builders that turn
// descriptors into library objects.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "octnag/baselines.hpp"
#include "octnag/dynamics.hpp"
#include "octnag/graph.hpp"
#include "octnag/integrator.hpp"
#include "octnag/objective.hpp"
#include "octnag/schedule.hpp"

namespace octnag::experiment {

using json = nlohmann::json;

enum class Mode { Centralized, Distributed, Baseline };

inline const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Centralized: return "centralized";
    case Mode::Distributed: return "distributed";
    case Mode::Baseline: return "baseline";
  }
  return "unknown";
}

[[noreturn]] inline void config_error(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ConfigError, "field '" + field + "': " + what);
}

namespace detail {

inline const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) config_error(path + key, "is required");
  return j.at(key);
}

inline double number(const json& j, const std::string& key, const std::string& path, std::optional<double> fallback = {}) {
  if (!j.is_object() || !j.contains(key)) {
    if (fallback) return *fallback;
    config_error(path + key, "is required");
  }
  const json& v = j.at(key);
  if (!v.is_number()) config_error(path + key, "must be a number");
  const double out = v.get<double>();
  if (!std::isfinite(out)) config_error(path + key, "must be finite");
  return out;
}

inline std::string text(const json& j, const std::string& key, const std::string& path,
                        std::optional<std::string> fallback = {}) {
  if (!j.is_object() || !j.contains(key)) {
    if (fallback) return *fallback;
    config_error(path + key, "is required");
  }
  if (!j.at(key).is_string()) config_error(path + key, "must be a string");
  return j.at(key).get<std::string>();
}

inline std::vector<double> numbers(const json& j, const std::string& field) {
  if (!j.is_array()) config_error(field, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) config_error(field, "must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace detail

struct ObjectiveSpec {
  std::string key = "sin_scalar";
  int agents = 6;  // distributed_sin_quadratic
  int dim = 6;     // distributed_sin_quadratic
  std::vector<std::vector<double>> Q;  // modulated_quadratic
  std::vector<double> b, c;
  double omega = 1.0;
};

struct ScheduleSpec {
  ScalingFamily family = ScalingFamily::ConstantSigma;
  double m = -2.0, sigma = 2.0, b0 = 2.0, p = 0.0;
};

struct SolverSpec {
  Method method = Method::DormandPrince45;
  double t0 = 0.0;
  double t_end = 50.0;
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  std::optional<double> max_step;
  double initial_step = 1e-4;
  std::int64_t max_rhs_evals = 100'000'000;
  double samples_per_unit_time = 100.0;

  int sample_count() const {
    return static_cast<int>(std::llround((t_end - t0) * samples_per_unit_time)) + 1;
  }
};

struct NetworkSpec {
  std::string preset;  // "ring6", "ring", "path", "complete" or empty for an explicit edge list
  int n = 6;
  std::vector<Edge> edges;
};

struct GainSpec {
  std::string kind = "constant";
  double c = 2.0;
};

struct BaselineSpec {
  std::string algorithm = "ogd";
  std::string step_rule = "sqrt_decay";
  double c = 0.67;
  double eta = 2.0;
  double beta = 0.02;
  double period = 0.1;
  std::int64_t steps = 100000;
  double radius = 1.0;
  std::int64_t decimation = 1000;
};

struct ExperimentConfig {
  std::string name;
  std::string description;
  Mode mode = Mode::Centralized;
  std::string dynamics = "oct_nag";
  GainSpec gain;
  ObjectiveSpec objective;
  ScheduleSpec schedule;
  SolverSpec solver;
  std::vector<double> initial_x, initial_v;
  std::optional<NetworkSpec> network;
  std::optional<double> k1;
  std::vector<double> horizons;
  std::vector<std::string> regrets{"static", "dynamic"};
  double comparator_tol = 1e-10;
  std::optional<BaselineSpec> baseline;
  std::vector<std::string> plots{"state", "gap", "regret"};
  int plot_coordinate = 0;
  std::int64_t trajectory_stride = 1;
  json checks = json::array();
  std::int64_t seed = 0;
  std::string output_dir;
};

// Decision dimension and stacked position length implied by the config.
inline int decision_dim(const ExperimentConfig& cfg) {
  if (cfg.objective.key == "sin_scalar") return 1;
  if (cfg.objective.key == "distributed_sin_quadratic") return cfg.objective.dim;
  return static_cast<int>(cfg.objective.b.size());
}

inline int agent_count(const ExperimentConfig& cfg) {
  return cfg.mode == Mode::Distributed ? cfg.objective.agents : 1;
}

namespace detail {

inline ObjectiveSpec parse_objective(const json& j) {
  const std::string path = "objective.";
  ObjectiveSpec o;
  o.key = text(j, "key", path);
  if (o.key == "sin_scalar") return o;
  if (o.key == "distributed_sin_quadratic") {
    o.agents = static_cast<int>(number(j, "agents", path, 6.0));
    o.dim = static_cast<int>(number(j, "dim", path, double(o.agents)));
    if (o.agents < 1) config_error(path + "agents", "must be positive");
    if (o.dim < o.agents) config_error(path + "dim", "must be at least the number of agents");
    return o;
  }
  if (o.key == "modulated_quadratic") {
    const json& q = require(j, "Q", path);
    if (!q.is_array() || q.empty()) config_error(path + "Q", "must be a non-empty matrix");
    for (const auto& row : q) o.Q.push_back(numbers(row, path + "Q"));
    o.b = numbers(require(j, "b", path), path + "b");
    o.c = j.contains("c") ? numbers(j.at("c"), path + "c") : std::vector<double>(o.b.size(), 0.0);
    o.omega = number(j, "omega", path, 1.0);
    for (const auto& row : o.Q) {
      if (row.size() != o.Q.size()) config_error(path + "Q", "must be square");
    }
    if (o.b.size() != o.Q.size() || o.c.size() != o.Q.size()) config_error(path + "b", "size must match Q");
    return o;
  }
  config_error(path + "key", "unknown objective '" + o.key + "'");
}

inline ScheduleSpec parse_schedule(const json& j) {
  const std::string path = "schedule.";
  ScheduleSpec s;
  const std::string family = text(j, "family", path, "constant_sigma");
  if (family == "constant_sigma") {
    s.family = ScalingFamily::ConstantSigma;
  } else if (family == "polynomial_sigma") {
    s.family = ScalingFamily::PolynomialSigma;
  } else {
    config_error(path + "family", "must be constant_sigma or polynomial_sigma");
  }
  s.m = number(j, "m", path);
  s.sigma = number(j, "sigma", path);
  s.b0 = number(j, "b0", path);
  s.p = s.family == ScalingFamily::ConstantSigma ? 0.0 : number(j, "p", path, 1.0);
  try {
    ScalingSchedule(s.family, s.m, s.sigma, s.b0, s.p);
  } catch (const Error& e) {
    config_error("schedule", e.what());
  }
  return s;
}

inline SolverSpec parse_solver(const json& j) {
  const std::string path = "solver.";
  SolverSpec s;
  const std::string method = text(j, "method", path, "dopri5");
  if (method == "dopri5") {
    s.method = Method::DormandPrince45;
  } else if (method == "trbdf2") {
    s.method = Method::TrBdf2;
  } else {
    config_error(path + "method", "must be dopri5 or trbdf2");
  }
  s.t0 = number(j, "t0", path, 0.0);
  s.t_end = number(j, "t_end", path);
  if (!(s.t_end > s.t0)) config_error(path + "t_end", "must exceed t0");
  s.rel_tol = number(j, "rel_tol", path, s.rel_tol);
  s.abs_tol = number(j, "abs_tol", path, s.abs_tol);
  if (j.contains("max_step")) s.max_step = number(j, "max_step", path);
  s.initial_step = number(j, "initial_step", path, s.initial_step);
  s.max_rhs_evals = static_cast<std::int64_t>(number(j, "max_rhs_evals", path, double(s.max_rhs_evals)));
  s.samples_per_unit_time = number(j, "samples_per_unit_time", path, s.samples_per_unit_time);
  if (!(s.rel_tol > 0.0)) config_error(path + "rel_tol", "must be positive");
  if (!(s.abs_tol > 0.0)) config_error(path + "abs_tol", "must be positive");
  if (s.max_step && !(*s.max_step > 0.0)) config_error(path + "max_step", "must be positive");
  if (!(s.initial_step > 0.0)) config_error(path + "initial_step", "must be positive");
  if (s.max_rhs_evals <= 0) config_error(path + "max_rhs_evals", "must be positive");
  if (!(s.samples_per_unit_time > 0.0) || s.sample_count() < 2) {
    config_error(path + "samples_per_unit_time", "must give at least two samples");
  }
  return s;
}

inline NetworkSpec parse_network(const json& j) {
  const std::string path = "network.";
  NetworkSpec n;
  if (j.contains("preset")) {
    n.preset = text(j, "preset", path);
    if (n.preset == "ring6") {
      n.n = 6;
    } else if (n.preset == "ring" || n.preset == "path" || n.preset == "complete") {
      n.n = static_cast<int>(number(j, "n", path));
    } else {
      config_error(path + "preset", "unknown preset '" + n.preset + "'");
    }
    return n;
  }
  n.n = static_cast<int>(number(j, "n", path));
  const json& edges = require(j, "edges", path);
  if (!edges.is_array()) config_error(path + "edges", "must be an array of [i, j, weight]");
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        !e[2].is_number()) {
      config_error(path + "edges", "entries must be [i, j, weight] with 1-based integer indices");
    }
    n.edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
  }
  return n;
}

inline BaselineSpec parse_baseline(const json& j) {
  const std::string path = "baseline.";
  BaselineSpec b;
  b.algorithm = text(j, "algorithm", path);
  if (b.algorithm == "ogd") {
    b.step_rule = text(j, "step_rule", path, "sqrt_decay");
    if (b.step_rule != "sqrt_decay" && b.step_rule != "hyperbolic_decay" && b.step_rule != "fixed") {
      config_error(path + "step_rule", "must be sqrt_decay, hyperbolic_decay or fixed");
    }
    b.c = number(j, "c", path);
  } else if (b.algorithm == "adagrad") {
    b.eta = number(j, "eta", path);
  } else if (b.algorithm == "ftal") {
    b.beta = number(j, "beta", path);
  } else {
    config_error(path + "algorithm", "must be ogd, adagrad or ftal");
  }
  b.period = number(j, "period", path, b.period);
  b.steps = static_cast<std::int64_t>(number(j, "steps", path, double(b.steps)));
  b.radius = number(j, "radius", path, b.radius);
  b.decimation = static_cast<std::int64_t>(number(j, "decimation", path, double(b.decimation)));
  if (!(b.period > 0.0)) config_error(path + "period", "must be positive");
  if (b.steps <= 0) config_error(path + "steps", "must be positive");
  if (!(b.radius > 0.0)) config_error(path + "radius", "must be positive");
  if (b.decimation <= 0) config_error(path + "decimation", "must be positive");
  return b;
}

inline std::vector<std::string> strings(const json& j, const std::string& field) {
  if (!j.is_array()) config_error(field, "must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) config_error(field, "must be an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace detail

inline ExperimentConfig parse_config(const json& j) {
  using namespace detail;
  if (!j.is_object()) config_error("<root>", "config must be a JSON object");
  ExperimentConfig cfg;
  cfg.name = text(j, "name", "");
  cfg.description = text(j, "description", "", "");
  const std::string mode = text(j, "mode", "");
  if (mode == "centralized") {
    cfg.mode = Mode::Centralized;
  } else if (mode == "distributed") {
    cfg.mode = Mode::Distributed;
  } else if (mode == "baseline") {
    cfg.mode = Mode::Baseline;
  } else {
    config_error("mode", "must be centralized, distributed or baseline");
  }
  cfg.objective = parse_objective(require(j, "objective", ""));
  cfg.seed = static_cast<std::int64_t>(number(j, "seed", "", 0.0));
  cfg.output_dir = text(j, "output_dir", "", "");
  cfg.comparator_tol = number(j, "comparator_tol", "", cfg.comparator_tol);
  if (!(cfg.comparator_tol > 0.0)) config_error("comparator_tol", "must be positive");
  if (j.contains("plots")) cfg.plots = strings(j.at("plots"), "plots");
  for (const auto& p : cfg.plots) {
    if (p != "state" && p != "gap" && p != "regret") config_error("plots", "unknown plot '" + p + "'");
  }
  if (j.contains("checks")) {
    if (!j.at("checks").is_array()) config_error("checks", "must be an array");
    cfg.checks = j.at("checks");
  }

  if (cfg.mode == Mode::Baseline) {
    if (cfg.objective.key == "distributed_sin_quadratic") config_error("objective.key", "baselines need a centralized objective");
    cfg.baseline = parse_baseline(require(j, "baseline", ""));
    cfg.plots.erase(std::remove_if(cfg.plots.begin(), cfg.plots.end(), [](const std::string& p) { return p != "gap"; }),
                    cfg.plots.end());
    if (j.contains("initial")) cfg.initial_x = numbers(require(j.at("initial"), "x", "initial."), "initial.x");
    return cfg;
  }

  cfg.solver = parse_solver(require(j, "solver", ""));
  cfg.dynamics = text(j, "dynamics", "", "oct_nag");
  if (cfg.dynamics != "oct_nag" && cfg.dynamics != "gradient_flow") {
    config_error("dynamics", "must be oct_nag or gradient_flow");
  }
  if (cfg.mode == Mode::Distributed && cfg.dynamics != "oct_nag") config_error("dynamics", "distributed runs use oct_nag");
  if (cfg.dynamics == "gradient_flow") {
    const json& g = require(j, "gain", "");
    cfg.gain.kind = text(g, "kind", "gain.");
    if (cfg.gain.kind != "constant" && cfg.gain.kind != "hyperbolic") config_error("gain.kind", "must be constant or hyperbolic");
    cfg.gain.c = number(g, "c", "gain.");
  } else {
    cfg.schedule = parse_schedule(require(j, "schedule", ""));
  }

  if (cfg.mode == Mode::Distributed) {
    if (cfg.objective.key != "distributed_sin_quadratic") {
      config_error("objective.key", "distributed runs use distributed_sin_quadratic");
    }
    cfg.network = parse_network(require(j, "network", ""));
    if (cfg.network->n != cfg.objective.agents) config_error("network.n", "must equal objective.agents");
    cfg.k1 = number(j, "k1", "");
    if (!(*cfg.k1 > 0.0)) config_error("k1", "must be positive");
    cfg.plot_coordinate = cfg.objective.dim - 1;
  }
  cfg.plot_coordinate = static_cast<int>(number(j, "plot_coordinate", "", double(cfg.plot_coordinate)));
  if (cfg.plot_coordinate < 0 || cfg.plot_coordinate >= decision_dim(cfg)) {
    config_error("plot_coordinate", "outside the decision dimension");
  }
  cfg.trajectory_stride = static_cast<std::int64_t>(number(j, "trajectory_stride", "", 1.0));
  if (cfg.trajectory_stride <= 0) config_error("trajectory_stride", "must be positive");

  cfg.horizons = j.contains("horizons") ? numbers(j.at("horizons"), "horizons") : std::vector<double>{cfg.solver.t_end};
  if (cfg.horizons.empty()) config_error("horizons", "must not be empty");
  for (std::size_t i = 0; i < cfg.horizons.size(); ++i) {
    if (!(cfg.horizons[i] > cfg.solver.t0) || cfg.horizons[i] > cfg.solver.t_end) {
      config_error("horizons", "values must lie in (t0, t_end]");
    }
    if (i > 0 && !(cfg.horizons[i] > cfg.horizons[i - 1])) config_error("horizons", "must be strictly ascending");
  }
  if (j.contains("regrets")) cfg.regrets = strings(j.at("regrets"), "regrets");
  for (const auto& r : cfg.regrets) {
    if (r != "static" && r != "dynamic") config_error("regrets", "entries must be static or dynamic");
  }

  const int positions = decision_dim(cfg) * agent_count(cfg);
  if (j.contains("initial")) {
    const json& init = j.at("initial");
    if (init.contains("x")) cfg.initial_x = numbers(init.at("x"), "initial.x");
    if (init.contains("v")) cfg.initial_v = numbers(init.at("v"), "initial.v");
  }
  if (cfg.initial_x.empty()) cfg.initial_x.assign(static_cast<std::size_t>(positions), 0.0);
  if (cfg.initial_v.empty()) cfg.initial_v.assign(static_cast<std::size_t>(positions), 0.0);
  if (static_cast<int>(cfg.initial_x.size()) != positions) {
    config_error("initial.x", "must have " + std::to_string(positions) + " entries");
  }
  if (static_cast<int>(cfg.initial_v.size()) != positions) {
    config_error("initial.v", "must have " + std::to_string(positions) + " entries");
  }
  return cfg;
}

// Serializes the fully resolved config (defaults filled in).
inline json to_json(const ExperimentConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["description"] = cfg.description;
  j["mode"] = to_string(cfg.mode);
  json obj{{"key", cfg.objective.key}};
  if (cfg.objective.key == "distributed_sin_quadratic") {
    obj["agents"] = cfg.objective.agents;
    obj["dim"] = cfg.objective.dim;
  } else if (cfg.objective.key == "modulated_quadratic") {
    obj["Q"] = cfg.objective.Q;
    obj["b"] = cfg.objective.b;
    obj["c"] = cfg.objective.c;
    obj["omega"] = cfg.objective.omega;
  }
  j["objective"] = obj;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  j["comparator_tol"] = cfg.comparator_tol;
  j["plots"] = cfg.plots;
  j["checks"] = cfg.checks;
  if (cfg.mode == Mode::Baseline) {
    const BaselineSpec& b = *cfg.baseline;
    json bj{{"algorithm", b.algorithm}, {"period", b.period}, {"steps", b.steps}, {"radius", b.radius},
            {"decimation", b.decimation}};
    if (b.algorithm == "ogd") {
      bj["step_rule"] = b.step_rule;
      bj["c"] = b.c;
    } else if (b.algorithm == "adagrad") {
      bj["eta"] = b.eta;
    } else {
      bj["beta"] = b.beta;
    }
    j["baseline"] = bj;
    j["initial"] = {{"x", cfg.initial_x.empty() ? std::vector<double>(size_t(decision_dim(cfg)), 0.0) : cfg.initial_x}};
    return j;
  }
  j["dynamics"] = cfg.dynamics;
  if (cfg.dynamics == "gradient_flow") {
    j["gain"] = {{"kind", cfg.gain.kind}, {"c", cfg.gain.c}};
  } else {
    j["schedule"] = {{"family", to_string(cfg.schedule.family)},
                     {"m", cfg.schedule.m},
                     {"sigma", cfg.schedule.sigma},
                     {"b0", cfg.schedule.b0},
                     {"p", cfg.schedule.p}};
  }
  const SolverSpec& s = cfg.solver;
  j["solver"] = {{"method", to_string(s.method)},
                 {"t0", s.t0},
                 {"t_end", s.t_end},
                 {"rel_tol", s.rel_tol},
                 {"abs_tol", s.abs_tol},
                 {"max_step", s.max_step.value_or((s.t_end - s.t0) / 100.0)},
                 {"initial_step", s.initial_step},
                 {"max_rhs_evals", s.max_rhs_evals},
                 {"samples_per_unit_time", s.samples_per_unit_time}};
  j["initial"] = {{"x", cfg.initial_x}, {"v", cfg.initial_v}};
  if (cfg.network) {
    json nj{{"n", cfg.network->n}};
    if (!cfg.network->preset.empty()) nj["preset"] = cfg.network->preset;
    json edges = json::array();
    for (const Edge& e : cfg.network->edges) edges.push_back({e.i, e.j, e.weight});
    if (cfg.network->preset.empty()) nj["edges"] = edges;
    j["network"] = nj;
  }
  if (cfg.k1) j["k1"] = *cfg.k1;
  j["horizons"] = cfg.horizons;
  j["regrets"] = cfg.regrets;
  j["plot_coordinate"] = cfg.plot_coordinate;
  j["trajectory_stride"] = cfg.trajectory_stride;
  return j;
}

// Applies "a.b.c=value" to a config document. The value is parsed as JSON
// when possible, otherwise stored as a string; numeric path parts index arrays.
inline void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) config_error(assignment, "override must look like key.path=value");
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) config_error(path, "empty path component");
    const bool is_index = part.find_first_not_of("0123456789") == std::string::npos;
    json* next = nullptr;
    if (is_index && node->is_array()) {
      const auto idx = std::stoul(part);
      if (idx >= node->size()) config_error(path, "array index out of range");
      next = &(*node)[idx];
    } else {
      if (!node->is_object()) {
        if (!node->is_null()) config_error(path, "cannot descend into a non-object");
        *node = json::object();
      }
      next = &(*node)[part];
    }
    if (dot == std::string::npos) {
      *next = value;
      return;
    }
    node = next;
    start = dot + 1;
  }
}

// ---- builders -------------------------------------------------------------

inline ScalingSchedule build_schedule(const ScheduleSpec& s) {
  try {
    return ScalingSchedule(s.family, s.m, s.sigma, s.b0, s.p);
  } catch (const Error& e) {
    config_error("schedule", e.what());
  }
}

inline TimeVaryingObjective build_objective(const ObjectiveSpec& o) {
  if (o.key == "sin_scalar") return make_sin_scalar();
  if (o.key == "distributed_sin_quadratic") {
    std::vector<TimeVaryingObjective> parts;
    for (int i = 1; i <= o.agents; ++i) parts.push_back(make_distributed_local(i, o.agents, o.dim));
    return make_sum_objective(std::move(parts));
  }
  const auto n = static_cast<Eigen::Index>(o.Q.size());
  Matrix Q(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) Q(r, c) = o.Q[size_t(r)][size_t(c)];
  }
  try {
    return make_modulated_quadratic(Q, detail::to_vector(o.b), detail::to_vector(o.c), o.omega);
  } catch (const Error& e) {
    config_error("objective", e.what());
  }
}

inline Network build_network(const NetworkSpec& n) {
  try {
    if (n.preset == "ring6" || n.preset == "ring") return Network::ring(n.n);
    if (n.preset == "path") return Network::path(n.n);
    if (n.preset == "complete") return Network::complete(n.n);
    return Network::from_edges(n.n, n.edges);
  } catch (const Error& e) {
    config_error("network", e.what());
  }
}

inline DistributedConfig build_distributed(const ExperimentConfig& cfg) {
  DistributedConfig d;
  d.k1 = cfg.k1.value_or(1.0);
  d.network = build_network(*cfg.network);
  for (int i = 1; i <= cfg.objective.agents; ++i) {
    d.locals.push_back(make_distributed_local(i, cfg.objective.agents, cfg.objective.dim));
  }
  return d;
}

inline SolverConfig build_solver(const SolverSpec& s) {
  SolverConfig c;
  c.method = s.method;
  c.rel_tol = s.rel_tol;
  c.abs_tol = s.abs_tol;
  c.max_step = s.max_step;
  c.initial_step = s.initial_step;
  c.max_rhs_evals = s.max_rhs_evals;
  c.sample_count = s.sample_count();
  return c;
}

}  // namespace octnag::experiment
