#pragma once
//
// Adaptive one-step ODE integration for first-order systems y' = F(t, y).
//
// Two steppers share one driver contract (uniform dense-output grid, stats,
// error kinds):
//   * Dormand-Prince 5(4) with PI step control and the pair's quartic
//     continuous extension. This is the default.
//   * TR-BDF2 (trapezoid stage + BDF2 stage, L-stable, order 2) with a
//     filtered local error estimate and cubic Hermite dense output, for
//     problems whose damping makes explicit steps impractically small.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "octnag/error.hpp"
#include "octnag/objective.hpp"

namespace octnag {

using RhsFn = std::function<void(double, ConstVectorRef, VectorRef)>;

struct OdeProblem {
  RhsFn rhs;
  double t0 = 0.0;
  double t_end = 1.0;
  Vector y0;
};

enum class Method { DormandPrince45, TrBdf2 };

inline const char* to_string(Method method) {
  return method == Method::DormandPrince45 ? "dopri5" : "trbdf2";
}

struct SolverConfig {
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  std::optional<double> max_step;  // defaults to span / 100
  double initial_step = 1e-4;
  std::int64_t max_rhs_evals = 100'000'000;
  int sample_count = 101;
  Method method = Method::DormandPrince45;
  bool keep_dense = false;

  double resolved_max_step(double span) const { return max_step.value_or(span / 100.0); }

  void validate(double span) const {
    auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidParameter, what); };
    if (!(rel_tol > 0.0)) fail("rel_tol must be positive");
    if (!(abs_tol > 0.0)) fail("abs_tol must be positive");
    if (!(resolved_max_step(span) > 0.0)) fail("max_step must be positive");
    if (!(initial_step > 0.0)) fail("initial_step must be positive");
    if (max_rhs_evals <= 0) fail("max_rhs_evals must be positive");
    if (sample_count < 2) fail("sample_count must be at least 2");
  }
};

struct SolverStats {
  std::int64_t accepted_steps = 0;
  std::int64_t rejected_steps = 0;
  std::int64_t rhs_evaluations = 0;
  double min_step = std::numeric_limits<double>::infinity();
  double max_step = 0.0;
};

// Piecewise polynomial solution retained step by step.
class DenseOutput {
 public:
  enum class Kind { DormandPrince, Hermite };

  void push(Kind kind, double t, double h, Matrix coeffs) {
    segments_.push_back({kind, t, h, std::move(coeffs)});
  }

  bool empty() const { return segments_.empty(); }
  double t_begin() const { return segments_.front().t; }
  double t_end() const { return segments_.back().t + segments_.back().h; }

  Vector operator()(double t) const {
    if (segments_.empty()) throw Error(ErrorKind::InvalidParameter, "empty dense output");
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double value, const Segment& s) { return value < s.t; });
    const Segment& seg = it == segments_.begin() ? segments_.front() : *std::prev(it);
    const double theta = (t - seg.t) / seg.h;
    return evaluate(seg.kind, seg.coeffs, theta);
  }

  static Vector evaluate(Kind kind, const Matrix& c, double theta) {
    const double theta1 = 1.0 - theta;
    if (kind == Kind::DormandPrince) {
      return c.col(0) + theta * (c.col(1) + theta1 * (c.col(2) + theta * (c.col(3) + theta1 * c.col(4))));
    }
    // columns: y0, y1 - y0, h f0, h f1
    return c.col(0) + theta * c.col(1) +
           theta * (theta - 1.0) * ((1.0 - 2.0 * theta) * c.col(1) + (theta - 1.0) * c.col(2) + theta * c.col(3));
  }

 private:
  struct Segment {
    Kind kind;
    double t;
    double h;
    Matrix coeffs;
  };
  std::vector<Segment> segments_;
};

struct Trajectory {
  std::vector<double> times;
  Matrix states;  // one row per sample
  SolverStats stats;
  Method method = Method::DormandPrince45;
  std::shared_ptr<const DenseOutput> dense;

  std::size_t size() const { return times.size(); }
  Vector state(std::size_t k) const { return states.row(static_cast<Eigen::Index>(k)).transpose(); }
  double spacing() const { return times.size() > 1 ? (times.back() - times.front()) / double(times.size() - 1) : 0.0; }

  // State at an arbitrary time: dense output when retained, else linear
  // interpolation between samples.
  Vector at(double t) const {
    if (dense) return (*dense)(t);
    if (t <= times.front()) return state(0);
    if (t >= times.back()) return state(size() - 1);
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times.begin()) - 1;
    const double w = (t - times[k]) / (times[k + 1] - times[k]);
    return (1.0 - w) * state(k) + w * state(k + 1);
  }
};

namespace detail {

inline double weighted_rms(const Vector& e, const Vector& y_a, const Vector& y_b, const SolverConfig& cfg) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y_a[i]), std::abs(y_b[i]));
    const double r = e[i] / scale;
    sum += r * r;
  }
  return std::sqrt(sum / double(std::max<Eigen::Index>(e.size(), 1)));
}

inline std::vector<double> uniform_grid(double t0, double t_end, int count) {
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double dt = (t_end - t0) / double(count - 1);
  for (int k = 0; k < count; ++k) grid[static_cast<std::size_t>(k)] = t0 + dt * k;
  grid.back() = t_end;
  return grid;
}

// Fills uniform-grid samples as accepted steps arrive.
class SampleRecorder {
 public:
  SampleRecorder(const OdeProblem& problem, const SolverConfig& cfg, Trajectory& traj)
      : traj_(traj), keep_dense_(cfg.keep_dense) {
    traj_.times = uniform_grid(problem.t0, problem.t_end, cfg.sample_count);
    traj_.states.resize(cfg.sample_count, problem.y0.size());
    traj_.states.row(0) = problem.y0.transpose();
    next_ = 1;
    if (keep_dense_) dense_ = std::make_shared<DenseOutput>();
  }

  void step(DenseOutput::Kind kind, double t, double h, const Matrix& coeffs, const Vector& y_new, bool last) {
    const double t_new = t + h;
    while (next_ < traj_.times.size() && (traj_.times[next_] <= t_new || last)) {
      if (next_ + 1 == traj_.times.size() && last) {
        traj_.states.row(static_cast<Eigen::Index>(next_)) = y_new.transpose();
      } else {
        const double theta = (traj_.times[next_] - t) / h;
        traj_.states.row(static_cast<Eigen::Index>(next_)) = DenseOutput::evaluate(kind, coeffs, theta).transpose();
      }
      ++next_;
    }
    if (keep_dense_) dense_->push(kind, t, h, coeffs);
  }

  void finish() {
    if (keep_dense_) traj_.dense = dense_;
  }

 private:
  Trajectory& traj_;
  bool keep_dense_;
  std::size_t next_ = 1;
  std::shared_ptr<DenseOutput> dense_;
};

inline void check_problem(const OdeProblem& problem, const SolverConfig& cfg) {
  if (!problem.rhs) throw Error(ErrorKind::InvalidParameter, "ODE problem without right-hand side");
  if (!(problem.t_end > problem.t0)) throw Error(ErrorKind::InvalidParameter, "t_end must exceed t0");
  if (problem.y0.size() == 0) throw Error(ErrorKind::InvalidParameter, "empty initial state");
  cfg.validate(problem.t_end - problem.t0);
}

inline void note_step(SolverStats& stats, double h) {
  ++stats.accepted_steps;
  stats.min_step = std::min(stats.min_step, h);
  stats.max_step = std::max(stats.max_step, h);
}

[[noreturn]] inline void throw_at(ErrorKind kind, const std::string& what, double t) {
  std::ostringstream msg;
  msg.precision(17);
  msg << what << " at t=" << t;
  throw Error(kind, msg.str());
}

// Dormand-Prince 5(4) coefficients.
struct Dp {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
};

// One Dormand-Prince step; k[0] holds F(t, y) on entry, k[6] = F(t+h, y_new) on exit.
struct DpWork {
  explicit DpWork(Eigen::Index n) : k(7, Vector(n)), tmp(n), y_new(n), err(n) {}
  std::vector<Vector> k;
  Vector tmp, y_new, err;
};

inline void dp_step(const RhsFn& rhs, double t, const Vector& y, double h, DpWork& w) {
  auto& k = w.k;
  w.tmp = y + h * Dp::a21 * k[0];
  rhs(t + Dp::c2 * h, w.tmp, k[1]);
  w.tmp = y + h * (Dp::a31 * k[0] + Dp::a32 * k[1]);
  rhs(t + Dp::c3 * h, w.tmp, k[2]);
  w.tmp = y + h * (Dp::a41 * k[0] + Dp::a42 * k[1] + Dp::a43 * k[2]);
  rhs(t + Dp::c4 * h, w.tmp, k[3]);
  w.tmp = y + h * (Dp::a51 * k[0] + Dp::a52 * k[1] + Dp::a53 * k[2] + Dp::a54 * k[3]);
  rhs(t + Dp::c5 * h, w.tmp, k[4]);
  w.tmp = y + h * (Dp::a61 * k[0] + Dp::a62 * k[1] + Dp::a63 * k[2] + Dp::a64 * k[3] + Dp::a65 * k[4]);
  rhs(t + h, w.tmp, k[5]);
  w.y_new = y + h * (Dp::a71 * k[0] + Dp::a73 * k[2] + Dp::a74 * k[3] + Dp::a75 * k[4] + Dp::a76 * k[5]);
  rhs(t + h, w.y_new, k[6]);
  w.err = h * (Dp::e1 * k[0] + Dp::e3 * k[2] + Dp::e4 * k[3] + Dp::e5 * k[4] + Dp::e6 * k[5] + Dp::e7 * k[6]);
}

inline Matrix dp_dense_coeffs(const Vector& y, const DpWork& w, double h) {
  const auto& k = w.k;
  Matrix c(y.size(), 5);
  const Vector ydiff = w.y_new - y;
  const Vector bspl = h * k[0] - ydiff;
  c.col(0) = y;
  c.col(1) = ydiff;
  c.col(2) = bspl;
  c.col(3) = ydiff - h * k[6] - bspl;
  c.col(4) = h * (Dp::d1 * k[0] + Dp::d3 * k[2] + Dp::d4 * k[3] + Dp::d5 * k[4] + Dp::d6 * k[5] + Dp::d7 * k[6]);
  return c;
}

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;
constexpr double kUnderflowFraction = 1e-14;
constexpr int kMaxNonFiniteRetries = 40;

inline Trajectory integrate_dopri(const OdeProblem& problem, const SolverConfig& cfg) {
  const double span = problem.t_end - problem.t0;
  const double h_max = cfg.resolved_max_step(span);
  const double h_min = kUnderflowFraction * span;
  constexpr double kBeta = 0.04;
  constexpr double kExpo = 0.2 - 0.75 * kBeta;

  Trajectory traj;
  traj.method = Method::DormandPrince45;
  SampleRecorder recorder(problem, cfg, traj);
  DpWork w(problem.y0.size());
  Vector y = problem.y0;
  double t = problem.t0;
  problem.rhs(t, y, w.k[0]);
  traj.stats.rhs_evaluations = 1;
  if (!w.k[0].allFinite()) throw_at(ErrorKind::NonFiniteState, "non-finite derivative", t);

  double h = std::min({cfg.initial_step, h_max, span});
  double err_old = 1e-4;
  bool last_rejected = false;
  int nonfinite_retries = 0;

  while (true) {
    bool last = false;
    if (t + h >= problem.t_end - 1e-12 * span) {
      h = problem.t_end - t;
      last = true;
    }
    if (h < h_min) throw_at(ErrorKind::StepSizeUnderflow, "step size " + std::to_string(h) + " below limit", t);
    if (traj.stats.rhs_evaluations + 6 > cfg.max_rhs_evals) {
      throw_at(ErrorKind::BudgetExceeded, "right-hand-side budget of " + std::to_string(cfg.max_rhs_evals) +
                                              " evaluations exhausted",
               t);
    }
    dp_step(problem.rhs, t, y, h, w);
    traj.stats.rhs_evaluations += 6;
    const double err = weighted_rms(w.err, y, w.y_new, cfg);

    if (!std::isfinite(err) || !w.y_new.allFinite() || !w.k[6].allFinite()) {
      if (++nonfinite_retries > kMaxNonFiniteRetries) throw_at(ErrorKind::NonFiniteState, "NaN/Inf in state", t + h);
      ++traj.stats.rejected_steps;
      h *= kMinFactor;
      last_rejected = true;
      continue;
    }
    nonfinite_retries = 0;

    if (err <= 1.0) {
      recorder.step(DenseOutput::Kind::DormandPrince, t, h, dp_dense_coeffs(y, w, h), w.y_new, last);
      note_step(traj.stats, h);
      double factor = kSafety * std::pow(std::max(err, 1e-300), -kExpo) * std::pow(err_old, kBeta);
      factor = std::clamp(factor, kMinFactor, kMaxFactor);
      if (last_rejected) factor = std::min(factor, 1.0);
      err_old = std::max(err, 1e-4);
      last_rejected = false;
      if (last) break;
      t += h;
      y = w.y_new;
      std::swap(w.k[0], w.k[6]);
      h = std::min(h * factor, h_max);
    } else {
      ++traj.stats.rejected_steps;
      h *= std::max(kMinFactor, kSafety * std::pow(err, -kExpo));
      last_rejected = true;
    }
  }
  recorder.finish();
  return traj;
}

// TR-BDF2 constants.
struct TrBdf2 {
  static inline const double gamma = 2.0 - std::sqrt(2.0);
  static inline const double d = gamma / 2.0;
  static inline const double w_gamma = 1.0 / (gamma * (2.0 - gamma));
  static inline const double error_constant = (-3.0 * gamma * gamma + 4.0 * gamma - 2.0) / (12.0 * (2.0 - gamma));
};

inline Matrix fd_jacobian(const RhsFn& rhs, double t, const Vector& y, const Vector& f0, std::int64_t& evals) {
  const Eigen::Index n = y.size();
  Matrix J(n, n);
  Vector yp = y;
  Vector fp(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double delta = 1.5e-8 * std::max(std::abs(y[j]), 1.0);
    yp[j] = y[j] + delta;
    rhs(t, yp, fp);
    J.col(j) = (fp - f0) / delta;
    yp[j] = y[j];
  }
  evals += n;
  return J;
}

inline Trajectory integrate_trbdf2(const OdeProblem& problem, const SolverConfig& cfg) {
  const double span = problem.t_end - problem.t0;
  const double h_max = cfg.resolved_max_step(span);
  const double h_min = kUnderflowFraction * span;
  constexpr int kMaxNewton = 10;
  constexpr double kNewtonTol = 1e-2;

  Trajectory traj;
  traj.method = Method::TrBdf2;
  SampleRecorder recorder(problem, cfg, traj);
  const Eigen::Index n = problem.y0.size();
  const Matrix eye = Matrix::Identity(n, n);
  Vector y = problem.y0;
  double t = problem.t0;
  Vector f_n(n), f_g(n), f_new(n), z(n), residual(n), delta(n);
  problem.rhs(t, y, f_n);
  traj.stats.rhs_evaluations = 1;
  if (!f_n.allFinite()) throw_at(ErrorKind::NonFiniteState, "non-finite derivative", t);

  auto weighted = [&](const Vector& v, const Vector& ref) { return weighted_rms(v, ref, ref, cfg); };

  // Solves z - d h F(t_s, z) = rhs_const by simplified Newton.
  auto solve_stage = [&](const Eigen::PartialPivLU<Matrix>& lu, double t_s, double h, const Vector& rhs_const,
                         Vector& z_io, Vector& f_out) {
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kMaxNewton; ++it) {
      problem.rhs(t_s, z_io, f_out);
      ++traj.stats.rhs_evaluations;
      if (!f_out.allFinite()) return false;
      residual = z_io - TrBdf2::d * h * f_out - rhs_const;
      delta = lu.solve(-residual);
      z_io += delta;
      const double norm = weighted(delta, z_io);
      if (!std::isfinite(norm) || (it > 1 && norm > 2.0 * prev)) return false;
      if (norm <= kNewtonTol) {
        problem.rhs(t_s, z_io, f_out);
        ++traj.stats.rhs_evaluations;
        return f_out.allFinite();
      }
      prev = norm;
    }
    return false;
  };

  double h = std::min({cfg.initial_step, h_max, span});
  bool last_rejected = false;
  int failures = 0;
  while (true) {
    bool last = false;
    if (t + h >= problem.t_end - 1e-12 * span) {
      h = problem.t_end - t;
      last = true;
    }
    if (h < h_min) throw_at(ErrorKind::StepSizeUnderflow, "step size " + std::to_string(h) + " below limit", t);
    if (traj.stats.rhs_evaluations + 2 * kMaxNewton + n + 4 > cfg.max_rhs_evals) {
      throw_at(ErrorKind::BudgetExceeded, "right-hand-side budget of " + std::to_string(cfg.max_rhs_evals) +
                                              " evaluations exhausted",
               t);
    }
    const Matrix J = fd_jacobian(problem.rhs, t, y, f_n, traj.stats.rhs_evaluations);
    const Eigen::PartialPivLU<Matrix> lu(eye - TrBdf2::d * h * J);

    z = y;
    bool ok = solve_stage(lu, t + TrBdf2::gamma * h, h, y + TrBdf2::d * h * f_n, z, f_g);
    Vector y_g = z;
    if (ok) {
      z = y + (y_g - y) / TrBdf2::gamma;
      // BDF2 stage weights sum to one, written as an increment so constant states stay exact
      ok = solve_stage(lu, t + h, h, y + TrBdf2::w_gamma * (y_g - y), z, f_new);
    }
    if (!ok) {
      if (++failures > kMaxNonFiniteRetries) throw_at(ErrorKind::NonFiniteState, "Newton iteration failed", t);
      ++traj.stats.rejected_steps;
      h *= 0.25;
      last_rejected = true;
      continue;
    }
    failures = 0;

    const Vector slope_a = (f_g - f_n) / (TrBdf2::gamma * h);
    const Vector slope_b = (f_new - f_g) / ((1.0 - TrBdf2::gamma) * h);
    const Vector raw = (2.0 * TrBdf2::error_constant * h * h) * (slope_b - slope_a);
    const Vector est = lu.solve(raw);
    const double err = weighted_rms(est, y, z, cfg);
    if (!std::isfinite(err)) {
      ++traj.stats.rejected_steps;
      h *= kMinFactor;
      last_rejected = true;
      continue;
    }

    if (err <= 1.0) {
      Matrix coeffs(n, 4);
      coeffs.col(0) = y;
      coeffs.col(1) = z - y;
      coeffs.col(2) = h * f_n;
      coeffs.col(3) = h * f_new;
      recorder.step(DenseOutput::Kind::Hermite, t, h, coeffs, z, last);
      note_step(traj.stats, h);
      double factor = std::clamp(kSafety * std::pow(std::max(err, 1e-300), -1.0 / 3.0), kMinFactor, kMaxFactor);
      if (last_rejected) factor = std::min(factor, 1.0);
      last_rejected = false;
      if (last) break;
      t += h;
      y = z;
      f_n = f_new;
      h = std::min(h * factor, h_max);
    } else {
      ++traj.stats.rejected_steps;
      h *= std::max(kMinFactor, kSafety * std::pow(err, -1.0 / 3.0));
      last_rejected = true;
    }
  }
  recorder.finish();
  return traj;
}

}  // namespace detail

inline Trajectory integrate(const OdeProblem& problem, const SolverConfig& config) {
  detail::check_problem(problem, config);
  if (config.method == Method::TrBdf2) return detail::integrate_trbdf2(problem, config);
  return detail::integrate_dopri(problem, config);
}

// Dormand-Prince with a fixed step h (the step is shrunk so that it divides
// the span). Returns the end state.
inline Vector integrate_fixed_step(const OdeProblem& problem, double h) {
  if (!(h > 0.0) || !(problem.t_end > problem.t0)) throw Error(ErrorKind::InvalidParameter, "bad fixed step setup");
  const double span = problem.t_end - problem.t0;
  const auto steps = static_cast<std::int64_t>(std::ceil(span / h - 1e-9));
  const double step = span / double(steps);
  detail::DpWork w(problem.y0.size());
  Vector y = problem.y0;
  for (std::int64_t s = 0; s < steps; ++s) {
    const double t = problem.t0 + step * double(s);
    problem.rhs(t, y, w.k[0]);
    detail::dp_step(problem.rhs, t, y, step, w);
    y = w.y_new;
  }
  return y;
}

struct OrderEstimate {
  std::optional<double> order;  // empty when both errors vanish (not applicable)
  double error_coarse = 0.0;
  double error_fine = 0.0;
};

// Observed convergence order of the fixed-step propagating method from
// runs at h and h/2 against a known end state.
inline OrderEstimate order_check(const OdeProblem& problem, const Vector& exact_end, double h) {
  OrderEstimate out;
  out.error_coarse = (integrate_fixed_step(problem, h) - exact_end).norm();
  out.error_fine = (integrate_fixed_step(problem, h / 2.0) - exact_end).norm();
  if (out.error_coarse > 0.0 && out.error_fine > 0.0) {
    out.order = std::log2(out.error_coarse / out.error_fine);
  }
  return out;
}

}  // namespace octnag
