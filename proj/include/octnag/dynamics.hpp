#pragma once
//
// First-order vector fields for the online accelerated dynamics.
//
// Centralized, y = (x, v):
//     x' = v
//     v' = -(e^a - a') v - e^{2a+b} grad f_t(x)
// Distributed, y = (x_1..x_N, v_1..v_N) (all positions first, agent-major):
//     v_i' = -(2e^a - a') v_i - e^{2a+b} grad f_{i,t}(x_i) - k1 e^{2a} [(L kron I) x]_i

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "octnag/graph.hpp"
#include "octnag/integrator.hpp"
#include "octnag/objective.hpp"
#include "octnag/schedule.hpp"

namespace octnag {

struct SecondOrderState {
  Vector x;
  Vector v;
};

inline Vector stack_state(const Vector& x, const Vector& v) {
  if (x.size() != v.size()) throw Error(ErrorKind::DimensionMismatch, "position and velocity lengths differ");
  Vector y(x.size() + v.size());
  y << x, v;
  return y;
}

inline SecondOrderState split_state(ConstVectorRef y) {
  if (y.size() % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "second-order state has odd length");
  const Eigen::Index n = y.size() / 2;
  return {y.head(n), y.tail(n)};
}

struct DistributedConfig {
  double k1 = 1.0;
  Network network = Network::path(1);
  std::vector<TimeVaryingObjective> locals;

  int agents() const { return network.n(); }
  int dim() const { return locals.empty() ? 0 : locals.front().dim(); }

  void validate() const {
    if (!(k1 > 0.0)) throw Error(ErrorKind::InvalidParameter, "consensus gain k1 must be positive");
    if (static_cast<int>(locals.size()) != network.n()) {
      throw Error(ErrorKind::DimensionMismatch, "need one local objective per agent");
    }
    for (const auto& f : locals) {
      if (f.dim() != dim()) throw Error(ErrorKind::DimensionMismatch, "local objectives differ in dimension");
    }
  }

  TimeVaryingObjective global_objective() const { return make_sum_objective(locals); }
};

inline RhsFn oct_nag_rhs(ScalingSchedule sched, TimeVaryingObjective obj) {
  const int n = obj.dim();
  return [sched, obj = std::move(obj), n](double t, ConstVectorRef y, VectorRef dy) {
    if (y.size() != 2 * n) throw Error(ErrorKind::DimensionMismatch, "OCT-NAG state must have length 2n");
    const ScheduleValues s = sched.eval(t);
    const auto x = y.head(n);
    const auto v = y.tail(n);
    dy.head(n) = v;
    auto acc = dy.tail(n);
    obj.gradient(t, x, acc);
    acc = -(s.e_alpha - s.alpha_dot) * v - s.e_2alpha_beta() * acc;
  };
}

// Test hook: Centralized swaps the distributed damping 2e^a - a' for e^a - a'.
enum class DampingForm { Distributed, Centralized };

inline RhsFn doct_nag_rhs(ScalingSchedule sched, DistributedConfig cfg,
                          DampingForm damping = DampingForm::Distributed) {
  cfg.validate();
  const int agents = cfg.agents();
  const int n = cfg.dim();
  const Eigen::Index len = Eigen::Index(agents) * n;
  auto shared = std::make_shared<const DistributedConfig>(std::move(cfg));
  return [sched, shared, agents, n, len, damping](double t, ConstVectorRef y, VectorRef dy) {
    if (y.size() != 2 * len) {
      throw Error(ErrorKind::DimensionMismatch, "DOCT-NAG state must have length 2Nn = " + std::to_string(2 * len));
    }
    const ScheduleValues s = sched.eval(t);
    const double damp = (damping == DampingForm::Distributed ? 2.0 : 1.0) * s.e_alpha - s.alpha_dot;
    const double grad_gain = s.e_2alpha_beta();
    const double coupling = shared->k1 * s.e_alpha * s.e_alpha;
    const auto x = y.head(len);
    const auto v = y.tail(len);
    dy.head(len) = v;
    auto acc = dy.tail(len);
    shared->network.kron_laplacian_apply(x, acc);
    acc *= -coupling;
    Vector g(n);
    for (int i = 0; i < agents; ++i) {
      shared->locals[static_cast<std::size_t>(i)].gradient(t, x.segment(Eigen::Index(i) * n, n), g);
      acc.segment(Eigen::Index(i) * n, n) -= grad_gain * g;
    }
    acc -= damp * v;
  };
}

// Time gain for the continuous online gradient flow x' = -gamma(t) grad f_t(x).
struct GradientGain {
  enum class Kind { Constant, Hyperbolic };
  Kind kind = Kind::Constant;
  double c = 1.0;

  static GradientGain constant(double c) { return {Kind::Constant, c}; }
  static GradientGain hyperbolic(double c) { return {Kind::Hyperbolic, c}; }

  double at(double t) const { return kind == Kind::Constant ? c : c / (t + 1.0); }
};

inline RhsFn gradient_flow_rhs(GradientGain gain, TimeVaryingObjective obj) {
  const int n = obj.dim();
  return [gain, obj = std::move(obj), n](double t, ConstVectorRef y, VectorRef dy) {
    if (y.size() != n) throw Error(ErrorKind::DimensionMismatch, "gradient flow state must have length n");
    obj.gradient(t, y, dy);
    dy *= -gain.at(t);
  };
}

}  // namespace octnag
