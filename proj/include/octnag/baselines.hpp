#pragma once
//
// Discrete-time online learners run on a sampled continuous objective:
// t_k = k * period, k = 0 .. steps-1, iterates projected onto the centered
// Euclidean ball of the given radius.

#include <cmath>
#include <string>
#include <vector>

#include "octnag/objective.hpp"
#include "octnag/regret.hpp"

namespace octnag {

struct StepRule {
  enum class Kind { SqrtDecay, HyperbolicDecay, Fixed };
  Kind kind = Kind::Fixed;
  double c = 1.0;

  static StepRule sqrt_decay(double c) { return {Kind::SqrtDecay, c}; }
  static StepRule hyperbolic_decay(double c) { return {Kind::HyperbolicDecay, c}; }
  static StepRule fixed(double c) { return {Kind::Fixed, c}; }

  double at(std::int64_t k) const {
    switch (kind) {
      case Kind::SqrtDecay: return c / std::sqrt(double(k) + 1.0);
      case Kind::HyperbolicDecay: return c / (double(k) + 1.0);
      case Kind::Fixed: return c;
    }
    return c;
  }
};

struct DiscreteRunParams {
  double period = 0.1;
  std::int64_t steps = 100000;
  double projection_radius = 1.0;
  Vector x0;  // defaults to the origin
  double comparator_tol = 1e-10;
  bool record_gaps = true;
};

struct DiscreteRun {
  std::string algorithm;
  double period = 0.0;
  std::int64_t steps = 0;
  double projection_radius = 0.0;
  std::vector<double> times;
  Matrix iterates;                // row k = x(t_k)
  std::vector<double> per_step_gap;  // f_{t_k}(x_k) - f_{t_k}(x*_{t_k})
  std::vector<Vector> dynamic_comparators;
};

inline Vector project_ball(const Vector& x, double radius) {
  const double norm = x.norm();
  return norm > radius ? Vector(x * (radius / norm)) : x;
}

namespace detail {

inline void check_params(const TimeVaryingObjective& obj, const DiscreteRunParams& p) {
  if (!(p.period > 0.0)) throw Error(ErrorKind::InvalidParameter, "sampling period must be positive");
  if (p.steps <= 0) throw Error(ErrorKind::InvalidParameter, "need at least one step");
  if (!(p.projection_radius > 0.0)) throw Error(ErrorKind::InvalidParameter, "projection radius must be positive");
  if (p.x0.size() != 0 && p.x0.size() != obj.dim()) throw Error(ErrorKind::DimensionMismatch, "x0 has wrong dimension");
}

// Drives an update rule x_{k+1} = update(k, t_k, x_k, g_k) and records gaps.
template <typename Update>
DiscreteRun run_discrete(const std::string& name, const TimeVaryingObjective& obj, const DiscreteRunParams& p,
                         Update&& update) {
  check_params(obj, p);
  const int n = obj.dim();
  DiscreteRun run;
  run.algorithm = name;
  run.period = p.period;
  run.steps = p.steps;
  run.projection_radius = p.projection_radius;
  run.times.resize(static_cast<std::size_t>(p.steps));
  run.iterates.resize(p.steps, n);
  Vector x = project_ball(p.x0.size() ? p.x0 : Vector::Zero(n), p.projection_radius);
  Vector g(n);
  for (std::int64_t k = 0; k < p.steps; ++k) {
    const double t = double(k) * p.period;
    run.times[static_cast<std::size_t>(k)] = t;
    run.iterates.row(k) = x.transpose();
    obj.gradient(t, x, g);
    x = project_ball(update(k, t, x, g), p.projection_radius);
  }
  if (p.record_gaps) {
    const auto sweep = dynamic_sweep(obj, run.times, Vector::Zero(n), p.comparator_tol);
    run.per_step_gap.resize(sweep.size());
    run.dynamic_comparators.reserve(sweep.size());
    for (std::size_t k = 0; k < sweep.size(); ++k) {
      const Vector xk = run.iterates.row(static_cast<Eigen::Index>(k)).transpose();
      run.per_step_gap[k] = obj.value(run.times[k], xk) - obj.value(run.times[k], sweep[k].point);
      run.dynamic_comparators.push_back(sweep[k].point);
    }
  }
  return run;
}

}  // namespace detail

// Projected online gradient descent x_{k+1} = P(x_k - eta_k grad f_{t_k}(x_k)).
inline DiscreteRun run_discrete_ogd(const TimeVaryingObjective& obj, StepRule rule, const DiscreteRunParams& p) {
  return detail::run_discrete("ogd", obj, p, [rule](std::int64_t k, double, const Vector& x, const Vector& g) {
    return Vector(x - rule.at(k) * g);
  });
}

// Diagonal AdaGrad with accumulated squared gradients.
inline DiscreteRun run_adagrad(const TimeVaryingObjective& obj, double eta, const DiscreteRunParams& p) {
  if (!(eta > 0.0)) throw Error(ErrorKind::InvalidParameter, "AdaGrad eta must be positive");
  static constexpr double kEps = 1e-8;
  Vector accum = Vector::Zero(obj.dim());
  return detail::run_discrete("adagrad", obj, p, [eta, accum](std::int64_t, double, const Vector& x, const Vector& g) mutable {
    accum += g.cwiseProduct(g);
    return Vector(x - eta * g.cwiseQuotient((accum.cwiseSqrt().array() + kEps).matrix()));
  });
}

// Follow-the-approximate-leader: the next iterate minimizes the accumulated
// surrogates f(x_s) + g_s^T (x - x_s) + beta/2 (g_s^T (x - x_s))^2, i.e.
// solves A x = b with A = sum beta g g^T and b = sum (beta g g^T x_s - g),
// then projects. A is regularized by 1e-10 I anchored at x0 so that an
// uninformative accumulator keeps the iterate in place.
inline DiscreteRun run_ftal(const TimeVaryingObjective& obj, double beta, const DiscreteRunParams& p) {
  if (!(beta > 0.0)) throw Error(ErrorKind::InvalidParameter, "FTAL beta must be positive");
  constexpr double kRegularization = 1e-10;
  const int n = obj.dim();
  const Vector anchor = project_ball(p.x0.size() ? p.x0 : Vector::Zero(n), p.projection_radius);
  Matrix A = kRegularization * Matrix::Identity(n, n);
  Vector b = kRegularization * anchor;
  return detail::run_discrete("ftal", obj, p, [beta, A, b](std::int64_t, double, const Vector& x, const Vector& g) mutable {
    const double gx = g.dot(x);
    A.noalias() += beta * g * g.transpose();
    b += (beta * gx) * g - g;
    return Vector(A.ldlt().solve(b));
  });
}

struct DiscreteRegrets {
  double static_regret = 0.0;
  double dynamic_regret = 0.0;
  ComparatorRecord offline;
};

// Sums (not integrals) over the sample times against x~(steps * period) and x*(t_k).
inline DiscreteRegrets discrete_regrets(const DiscreteRun& run, const TimeVaryingObjective& obj, double tol = 1e-10) {
  if (run.times.empty()) throw Error(ErrorKind::InvalidParameter, "empty run");
  DiscreteRegrets out;
  const double horizon = double(run.steps) * run.period;
  out.offline = offline_minimizer(obj, 0.0, horizon, tol);
  std::vector<Vector> comparators = run.dynamic_comparators;
  if (comparators.size() != run.times.size()) {
    const auto sweep = dynamic_sweep(obj, run.times, Vector::Zero(obj.dim()), tol);
    comparators.clear();
    for (const auto& rec : sweep) comparators.push_back(rec.point);
  }
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    const double t = run.times[k];
    const Vector xk = run.iterates.row(static_cast<Eigen::Index>(k)).transpose();
    const double paid = obj.value(t, xk);
    out.static_regret += paid - obj.value(t, out.offline.point);
    out.dynamic_regret += paid - obj.value(t, comparators[k]);
  }
  return out;
}

}  // namespace octnag
