#pragma once
//
// Hindsight comparators, integrated regrets and Lyapunov-certificate audits.
//
// Regrets are composite-trapezoid integrals over a trajectory's uniform
// samples, starting at the trajectory's first sample time (T0):
//   static   R_s(T) = int_{T0}^{T} f_t(x(t)) - f_t(x~(T)) dt
//   dynamic  R_d(T) = int_{T0}^{T} f_t(x(t)) - f_t(x*_t)  dt
// Distributed runs replace f_t(x(t)) by the agent average (1/N) sum_j F_t(x_j(t))
// of the global cost F = sum_i f_i.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "octnag/dynamics.hpp"
#include "octnag/integrator.hpp"
#include "octnag/objective.hpp"
#include "octnag/quadrature.hpp"
#include "octnag/schedule.hpp"

namespace octnag {

enum class ComparatorKind { OfflineStatic, Dynamic };

struct ComparatorRecord {
  ComparatorKind kind = ComparatorKind::OfflineStatic;
  double horizon = 0.0;  // T for static comparators, sample time t for dynamic ones
  Vector point;
  // Static: ||grad int f_t dt|| / (T - T0). Dynamic: ||grad f_t||.
  double grad_norm = 0.0;
  std::string method = "newton";
  int iterations = 0;
};

enum class RegretKind { StaticCentralized, DynamicCentralized, StaticDistributed, DynamicDistributed };

inline const char* to_string(RegretKind kind) {
  switch (kind) {
    case RegretKind::StaticCentralized: return "static";
    case RegretKind::DynamicCentralized: return "dynamic";
    case RegretKind::StaticDistributed: return "static_distributed";
    case RegretKind::DynamicDistributed: return "dynamic_distributed";
  }
  return "unknown";
}

struct QuadratureInfo {
  std::string rule = "trapezoid";
  double samples_per_unit_time = 0.0;
};

struct RegretReport {
  RegretKind kind = RegretKind::StaticCentralized;
  std::vector<double> horizon_grid;
  std::vector<double> values;
  std::vector<double> quadrature_error;
  QuadratureInfo quadrature;
  // Static reports: one comparator per horizon. Dynamic reports: the sweep,
  // one comparator per sample time up to the largest horizon.
  std::vector<ComparatorRecord> comparators;
};

namespace detail {

inline double inf_norm(const Vector& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

// Central finite-difference Jacobian of a vector field.
inline Matrix central_jacobian(const std::function<Vector(const Vector&)>& field, const Vector& x, double rel_step) {
  const Eigen::Index n = x.size();
  Matrix J(n, n);
  Vector xp = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double delta = rel_step * (1.0 + std::abs(x[j]));
    xp[j] = x[j] + delta;
    const Vector plus = field(xp);
    xp[j] = x[j] - delta;
    const Vector minus = field(xp);
    xp[j] = x[j];
    J.col(j) = (plus - minus) / (2.0 * delta);
  }
  return 0.5 * (J + J.transpose());
}

// Newton on a gradient field with backtracking on the residual norm.
// Returns the number of iterations used, or nullopt on failure.
inline std::optional<int> newton_on_gradient(const std::function<Vector(const Vector&)>& grad, Vector& x,
                                             double target, int max_iter, double fd_step) {
  Vector g = grad(x);
  for (int it = 0; it < max_iter; ++it) {
    const double norm = g.norm();
    if (norm <= target) return it;
    const Matrix H = central_jacobian(grad, x, fd_step);
    Vector dir;
    Eigen::LDLT<Matrix> ldlt(H);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive() && ldlt.vectorD().minCoeff() > 0.0) {
      dir = -ldlt.solve(g);
    } else {
      const double curvature = std::max(H.norm(), 1e-12);
      dir = -g / curvature;
    }
    if (!dir.allFinite()) return std::nullopt;
    double step = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls) {
      const Vector trial = x + step * dir;
      const Vector g_trial = grad(trial);
      if (g_trial.allFinite() && g_trial.norm() < norm) {
        x = trial;
        g = g_trial;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) return g.norm() <= target ? std::optional<int>(it) : std::nullopt;
  }
  return g.norm() <= target ? std::optional<int>(max_iter) : std::nullopt;
}

}  // namespace detail

// x~(T) = argmin_x int_{T0}^{T} f_t(x) dt.
inline ComparatorRecord offline_minimizer(const TimeVaryingObjective& obj, double T0, double T, double tol,
                                          std::optional<Vector> start = {}) {
  if (!(T > T0)) throw Error(ErrorKind::InvalidParameter, "offline minimizer needs T > T0");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "tolerance must be positive");
  const double span = T - T0;
  const double quad_tol = tol * span / 10.0;
  const int n = obj.dim();
  auto grad_G = [&](const Vector& x) {
    return romberg([&](double t) { return obj.gradient(t, x); }, T0, T, quad_tol);
  };
  Vector x = start.value_or(Vector::Zero(n));
  if (x.size() != n) throw Error(ErrorKind::DimensionMismatch, "offline minimizer start has wrong dimension");
  const auto iterations = detail::newton_on_gradient(grad_G, x, tol * span, 500, 1e-4);
  const double residual = grad_G(x).norm() / span;
  if (!iterations || residual > tol) {
    throw Error(ErrorKind::NoConvergence, "offline minimizer did not converge for T=" + std::to_string(T));
  }
  return {ComparatorKind::OfflineStatic, T, x, residual, "newton", *iterations};
}

// x*_t = argmin_x f_t(x), warm-started.
inline ComparatorRecord dynamic_minimizer(const TimeVaryingObjective& obj, double t, const Vector& warm_start,
                                          double tol) {
  if (warm_start.size() != obj.dim()) throw Error(ErrorKind::DimensionMismatch, "warm start has wrong dimension");
  auto grad = [&](const Vector& x) { return obj.gradient(t, x); };
  ComparatorRecord rec{ComparatorKind::Dynamic, t, warm_start, 0.0, "newton", 0};
  Vector x = warm_start;
  if (const auto it = detail::newton_on_gradient(grad, x, tol, 50, 1e-6)) {
    rec.point = x;
    rec.grad_norm = grad(x).norm();
    rec.iterations = *it;
    return rec;
  }

  if (obj.dim() == 1) {
    // Bracket the sign change of the derivative around the warm start, then bisect.
    auto d = [&](double s) { return obj.gradient(t, Vector::Constant(1, s))[0]; };
    double lo = warm_start[0] - 1.0, hi = warm_start[0] + 1.0;
    for (int k = 0; k < 60 && d(lo) > 0.0; ++k) lo -= std::ldexp(1.0, k);
    for (int k = 0; k < 60 && d(hi) < 0.0; ++k) hi += std::ldexp(1.0, k);
    int steps = 0;
    for (; steps < 200 && std::abs(d(0.5 * (lo + hi))) > tol; ++steps) {
      const double mid = 0.5 * (lo + hi);
      (d(mid) > 0.0 ? hi : lo) = mid;
    }
    rec.point = Vector::Constant(1, 0.5 * (lo + hi));
    rec.method = "bisection";
    rec.iterations = steps;
  } else {
    Vector y = warm_start;
    int steps = 0;
    for (; steps < 200; ++steps) {
      const Vector g = grad(y);
      if (g.norm() <= tol) break;
      double step = 1.0;
      const double f0 = obj.value(t, y);
      while (step > 1e-16 && obj.value(t, y - step * g) > f0 - 0.5 * step * g.squaredNorm()) step *= 0.5;
      y -= step * g;
    }
    rec.point = y;
    rec.method = "gradient";
    rec.iterations = steps;
  }
  rec.grad_norm = grad(rec.point).norm();
  if (!(rec.grad_norm <= tol)) {
    throw Error(ErrorKind::NoConvergence, "dynamic minimizer failed at t=" + std::to_string(t) + " (" + rec.method + ")");
  }
  return rec;
}

// Warm-started comparator sweep x*_t over the given times.
inline std::vector<ComparatorRecord> dynamic_sweep(const TimeVaryingObjective& obj, std::span<const double> times,
                                                   const Vector& warm_start, double tol) {
  std::vector<ComparatorRecord> out;
  out.reserve(times.size());
  Vector warm = warm_start;
  for (double t : times) {
    out.push_back(dynamic_minimizer(obj, t, warm, tol));
    warm = out.back().point;
  }
  return out;
}

// What the algorithm "pays" at a sample, and the global cost comparators minimize.
struct CostModel {
  TimeVaryingObjective global;
  std::function<double(double, const Vector&)> algorithm_cost;  // (t, trajectory row)
  RegretKind static_kind;
  RegretKind dynamic_kind;
};

inline CostModel centralized_cost(const TimeVaryingObjective& obj) {
  const int n = obj.dim();
  return {obj, [obj, n](double t, const Vector& row) { return obj.value(t, row.head(n)); },
          RegretKind::StaticCentralized, RegretKind::DynamicCentralized};
}

inline CostModel distributed_cost(const DistributedConfig& cfg) {
  cfg.validate();
  TimeVaryingObjective global = cfg.global_objective();
  const int agents = cfg.agents();
  const int n = cfg.dim();
  return {global,
          [global, agents, n](double t, const Vector& row) {
            double total = 0.0;
            for (int j = 0; j < agents; ++j) total += global.value(t, row.segment(Eigen::Index(j) * n, n));
            return total / double(agents);
          },
          RegretKind::StaticDistributed, RegretKind::DynamicDistributed};
}

namespace detail {

inline void check_horizons(const Trajectory& traj, std::span<const double> grid) {
  if (traj.size() < 2) throw Error(ErrorKind::InvalidParameter, "trajectory has fewer than two samples");
  const double snap = 1e-9 * (traj.times.back() - traj.times.front());
  for (double T : grid) {
    if (!(T > traj.times.front()) || T > traj.times.back() + snap) {
      throw Error(ErrorKind::InvalidParameter, "horizon " + std::to_string(T) + " outside the trajectory span");
    }
  }
}

inline std::size_t samples_through(const Trajectory& traj, double T) {
  // count of samples needed to integrate up to T (including the one past T for a partial tail)
  const double snap = 1e-9 * (traj.times.back() - traj.times.front());
  std::size_t count = 0;
  while (count < traj.size() && traj.times[count] <= T + snap) ++count;
  return std::min(count + 1, traj.size());
}

inline QuadratureInfo quadrature_info(const Trajectory& traj) {
  return {"trapezoid", traj.spacing() > 0.0 ? 1.0 / traj.spacing() : 0.0};
}

}  // namespace detail

inline RegretReport static_regret(const Trajectory& traj, const CostModel& model, std::span<const double> T_grid,
                                  double tol) {
  detail::check_horizons(traj, T_grid);
  RegretReport report;
  report.kind = model.static_kind;
  report.quadrature = detail::quadrature_info(traj);
  const double T0 = traj.times.front();
  std::vector<double> paid(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) paid[k] = model.algorithm_cost(traj.times[k], traj.state(k));
  for (double T : T_grid) {
    ComparatorRecord rec = offline_minimizer(model.global, T0, T, tol);
    const std::size_t count = detail::samples_through(traj, T);
    std::vector<double> integrand(count);
    for (std::size_t k = 0; k < count; ++k) integrand[k] = paid[k] - model.global.value(traj.times[k], rec.point);
    const QuadratureResult q = trapezoid(std::span(traj.times).first(count), integrand, T);
    report.horizon_grid.push_back(T);
    report.values.push_back(q.value);
    report.quadrature_error.push_back(q.error_estimate);
    report.comparators.push_back(std::move(rec));
  }
  return report;
}

inline RegretReport static_regret(const Trajectory& traj, const TimeVaryingObjective& obj,
                                  std::span<const double> T_grid, double tol) {
  return static_regret(traj, centralized_cost(obj), T_grid, tol);
}

inline RegretReport dynamic_regret(const Trajectory& traj, const CostModel& model, std::span<const double> T_grid,
                                   double tol) {
  detail::check_horizons(traj, T_grid);
  RegretReport report;
  report.kind = model.dynamic_kind;
  report.quadrature = detail::quadrature_info(traj);
  const double T_max = *std::max_element(T_grid.begin(), T_grid.end());
  const std::size_t count = detail::samples_through(traj, T_max);
  report.comparators =
      dynamic_sweep(model.global, std::span(traj.times).first(count), Vector::Zero(model.global.dim()), tol);
  std::vector<double> integrand(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = traj.times[k];
    integrand[k] = model.algorithm_cost(t, traj.state(k)) - model.global.value(t, report.comparators[k].point);
  }
  for (double T : T_grid) {
    const std::size_t used = detail::samples_through(traj, T);
    const QuadratureResult q = trapezoid(std::span(traj.times).first(used), std::span(integrand).first(used), T);
    report.horizon_grid.push_back(T);
    report.values.push_back(q.value);
    report.quadrature_error.push_back(q.error_estimate);
  }
  return report;
}

inline RegretReport dynamic_regret(const Trajectory& traj, const TimeVaryingObjective& obj, double T, double tol) {
  const double grid[] = {T};
  return dynamic_regret(traj, centralized_cost(obj), grid, tol);
}

inline RegretReport distributed_static_regret(const Trajectory& traj, const DistributedConfig& cfg,
                                              std::span<const double> T_grid, double tol) {
  return static_regret(traj, distributed_cost(cfg), T_grid, tol);
}

inline RegretReport distributed_dynamic_regret(const Trajectory& traj, const DistributedConfig& cfg, double T,
                                               double tol) {
  const double grid[] = {T};
  return dynamic_regret(traj, distributed_cost(cfg), grid, tol);
}

// Pointwise gap f_t(x(t)) - f_t(comparator_k) per sample (comparators may be
// a single fixed point or one per sample).
inline std::vector<double> gap_series(const Trajectory& traj, const CostModel& model,
                                      const std::vector<Vector>& comparators) {
  if (comparators.empty()) throw Error(ErrorKind::InvalidParameter, "no comparator points");
  const std::size_t count = comparators.size() == 1 ? traj.size() : std::min(traj.size(), comparators.size());
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = traj.times[k];
    const Vector& z = comparators.size() == 1 ? comparators.front() : comparators[k];
    out[k] = model.algorithm_cost(t, traj.state(k)) - model.global.value(t, z);
  }
  return out;
}

// V_z = 1/2 ||x + e^{-alpha} v - z||^2 + e^beta (f_t(x) - f_t(z))
inline double lyapunov_value(double t, const SecondOrderState& state, const Vector& z, const ScalingSchedule& sched,
                             const TimeVaryingObjective& obj) {
  if (state.x.size() != z.size() || state.v.size() != z.size()) {
    throw Error(ErrorKind::DimensionMismatch, "Lyapunov arguments differ in dimension");
  }
  const ScheduleValues s = sched.eval(t);
  const Vector r = state.x + state.v / s.e_alpha - z;
  return 0.5 * r.squaredNorm() + s.e_beta * (obj.value(t, state.x) - obj.value(t, z));
}

// Distributed certificate with z stacked as 1_N kron z:
// 1/2||x + e^{-a}v - z||^2 + 1/2||x - z||^2 + k1/2 x^T (L kron I) x + e^b (F(x) - F(z)).
inline double lyapunov_value_distributed(double t, const SecondOrderState& state, const Vector& z,
                                         const ScalingSchedule& sched, const DistributedConfig& cfg) {
  cfg.validate();
  const int agents = cfg.agents();
  const int n = cfg.dim();
  if (z.size() != n || state.x.size() != Eigen::Index(agents) * n || state.v.size() != state.x.size()) {
    throw Error(ErrorKind::DimensionMismatch, "distributed Lyapunov arguments have wrong dimension");
  }
  const ScheduleValues s = sched.eval(t);
  const Vector zz = z.replicate(agents, 1);
  const Vector r = state.x + state.v / s.e_alpha - zz;
  double F_x = 0.0, F_z = 0.0;
  for (int i = 0; i < agents; ++i) {
    const auto& f = cfg.locals[static_cast<std::size_t>(i)];
    F_x += f.value(t, state.x.segment(Eigen::Index(i) * n, n));
    F_z += f.value(t, z);
  }
  return 0.5 * r.squaredNorm() + 0.5 * (state.x - zz).squaredNorm() +
         0.5 * cfg.k1 * state.x.dot(cfg.network.kron_laplacian_apply(state.x)) + s.e_beta * (F_x - F_z);
}

struct LyapunovAudit {
  double satisfied_fraction = 0.0;
  double worst_violation = 0.0;  // max over samples of V' - bound (<= slack when satisfied)
  double worst_time = 0.0;
  std::size_t checked = 0;
};

// Checks V'_z <= -sigma (t+b0)^p (f_t(x) - f_t(z)) + e^beta (d_t f_t(x) - d_t f_t(z)) + slack at
// every sample, with V' a forward difference of step h through the dense output.
inline LyapunovAudit lyapunov_audit(const Trajectory& traj, const Vector& z, const ScalingSchedule& sched,
                                    const TimeVaryingObjective& obj, double h) {
  if (!traj.dense) throw Error(ErrorKind::InvalidParameter, "Lyapunov audit needs dense output (keep_dense)");
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidParameter, "audit step must be positive");
  const int n = obj.dim();
  LyapunovAudit audit;
  audit.worst_violation = -std::numeric_limits<double>::infinity();
  std::size_t satisfied = 0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    if (t + h > traj.times.back()) break;
    const Vector y0 = (*traj.dense)(t);
    const Vector y1 = (*traj.dense)(t + h);
    const SecondOrderState s0{y0.head(n), y0.tail(n)};
    const SecondOrderState s1{y1.head(n), y1.tail(n)};
    const double v0 = lyapunov_value(t, s0, z, sched, obj);
    const double v_dot = (lyapunov_value(t + h, s1, z, sched, obj) - v0) / h;
    const ScheduleValues sv = sched.eval(t);
    const double bound = -sched.scaling_target(t) * (obj.value(t, s0.x) - obj.value(t, z)) +
                         sv.e_beta * (obj.time_partial(t, s0.x) - obj.time_partial(t, z));
    const double slack = 1e-4 * (1.0 + std::abs(v0));
    const double violation = v_dot - bound;
    if (violation <= slack) ++satisfied;
    if (violation > audit.worst_violation) {
      audit.worst_violation = violation;
      audit.worst_time = t;
    }
    ++audit.checked;
  }
  audit.satisfied_fraction = audit.checked ? double(satisfied) / double(audit.checked) : 0.0;
  return audit;
}

// V_z at every sample of a centralized run.
inline std::vector<double> lyapunov_series(const Trajectory& traj, const Vector& z, const ScalingSchedule& sched,
                                           const TimeVaryingObjective& obj) {
  const int n = obj.dim();
  std::vector<double> out(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Vector y = traj.state(k);
    out[k] = lyapunov_value(traj.times[k], {y.head(n), y.tail(n)}, z, sched, obj);
  }
  return out;
}

}  // namespace octnag
