#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "octnag/error.hpp"

namespace octnag {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ConstVectorRef = Eigen::Ref<const Vector>;
using VectorRef = Eigen::Ref<Vector>;

// A time-varying differentiable cost f_t(x). Evaluation callbacks must be
// pure functions of (t, x): integrators evaluate them at trial times that
// may later be rejected.
class TimeVaryingObjective {
 public:
  using ValueFn = std::function<double(double, ConstVectorRef)>;
  using GradFn = std::function<void(double, ConstVectorRef, VectorRef)>;
  using PartialFn = std::function<double(double, ConstVectorRef)>;

  static constexpr double kDefaultTimeStep = 1e-6;

  TimeVaryingObjective(int dim, ValueFn value, GradFn grad, std::optional<PartialFn> time_partial = {},
                       std::string name = "custom", double time_fd_step = kDefaultTimeStep)
      : dim_(dim),
        value_(std::move(value)),
        grad_(std::move(grad)),
        time_partial_(std::move(time_partial)),
        name_(std::move(name)),
        time_fd_step_(time_fd_step) {
    if (dim_ <= 0) throw Error(ErrorKind::InvalidParameter, "objective dimension must be positive");
    if (!(time_fd_step_ > 0.0)) throw Error(ErrorKind::InvalidParameter, "time step must be positive");
  }

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  bool has_time_partial() const { return time_partial_.has_value(); }

  double value(double t, ConstVectorRef x) const {
    check(x.size());
    return value_(t, x);
  }

  void gradient(double t, ConstVectorRef x, VectorRef out) const {
    check(x.size());
    check(out.size());
    grad_(t, x, out);
  }

  Vector gradient(double t, ConstVectorRef x) const {
    Vector g(dim_);
    gradient(t, x, g);
    return g;
  }

  // Partial derivative in t; central difference when no closed form is registered.
  double time_partial(double t, ConstVectorRef x) const {
    check(x.size());
    if (time_partial_) return (*time_partial_)(t, x);
    const double h = time_fd_step_;
    return (value_(t + h, x) - value_(t - h, x)) / (2.0 * h);
  }

 private:
  void check(Eigen::Index n) const {
    if (n != dim_) {
      throw Error(ErrorKind::DimensionMismatch,
                  "objective '" + name_ + "' expects dimension " + std::to_string(dim_) + ", got " +
                      std::to_string(n));
    }
  }

  int dim_;
  ValueFn value_;
  GradFn grad_;
  std::optional<PartialFn> time_partial_;
  std::string name_;
  double time_fd_step_;
};

// f_t(x) = x^2 + sin(t) sin(x)
inline TimeVaryingObjective make_sin_scalar() {
  return TimeVaryingObjective(
      1, [](double t, ConstVectorRef x) { return x[0] * x[0] + std::sin(t) * std::sin(x[0]); },
      [](double t, ConstVectorRef x, VectorRef g) { g[0] = 2.0 * x[0] + std::sin(t) * std::cos(x[0]); },
      [](double t, ConstVectorRef x) { return std::cos(t) * std::sin(x[0]); }, "sin_scalar");
}

// Local cost of agent i (1-based) in the multi-agent sin-perturbed quadratic:
// f_{i,t}(x) = 10 (x^T x + 0.2 i sin(t) sin(x_i)).
inline TimeVaryingObjective make_distributed_local(int i, int n_agents, int dim) {
  if (n_agents <= 0 || i < 1 || i > n_agents || dim < i) {
    throw Error(ErrorKind::IndexOutOfRange, "agent index " + std::to_string(i) + " invalid for N=" +
                                                std::to_string(n_agents) + ", dim=" + std::to_string(dim));
  }
  const int k = i - 1;
  const double weight = 0.2 * i;
  return TimeVaryingObjective(
      dim,
      [k, weight](double t, ConstVectorRef x) {
        return 10.0 * (x.squaredNorm() + weight * std::sin(t) * std::sin(x[k]));
      },
      [k, weight](double t, ConstVectorRef x, VectorRef g) {
        g = 20.0 * x;
        g[k] += 10.0 * weight * std::sin(t) * std::cos(x[k]);
      },
      [k, weight](double t, ConstVectorRef x) { return 10.0 * weight * std::cos(t) * std::sin(x[k]); },
      "distributed_sin_quadratic[" + std::to_string(i) + "]");
}

// f_t(x) = x^T Q x / 2 + (b + c sin(omega t))^T x, Q symmetric positive semidefinite.
inline TimeVaryingObjective make_modulated_quadratic(const Matrix& Q, const Vector& b, const Vector& c,
                                                     double omega) {
  const auto n = Q.rows();
  if (n == 0 || Q.cols() != n || b.size() != n || c.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "modulated_quadratic: Q, b, c sizes disagree");
  }
  if (!Q.isApprox(Q.transpose(), 1e-12)) {
    throw Error(ErrorKind::InvalidParameter, "modulated_quadratic: Q must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(Q, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-12 * (1.0 + Q.norm())) {
    throw Error(ErrorKind::InvalidParameter, "modulated_quadratic: Q must be positive semidefinite");
  }
  auto shared = std::make_shared<const std::tuple<Matrix, Vector, Vector>>(Q, b, c);
  return TimeVaryingObjective(
      static_cast<int>(n),
      [shared, omega](double t, ConstVectorRef x) {
        const auto& [q, lin, mod] = *shared;
        return 0.5 * x.dot(q * x) + (lin + std::sin(omega * t) * mod).dot(x);
      },
      [shared, omega](double t, ConstVectorRef x, VectorRef g) {
        const auto& [q, lin, mod] = *shared;
        g = q * x + lin + std::sin(omega * t) * mod;
      },
      [shared, omega](double t, ConstVectorRef x) {
        const auto& mod = std::get<2>(*shared);
        return omega * std::cos(omega * t) * mod.dot(x);
      },
      "modulated_quadratic");
}

// Global cost sum_i f_{i,t}(x) over objectives sharing one dimension.
inline TimeVaryingObjective make_sum_objective(std::vector<TimeVaryingObjective> parts) {
  if (parts.empty()) throw Error(ErrorKind::InvalidParameter, "sum of zero objectives");
  const int dim = parts.front().dim();
  for (const auto& p : parts) {
    if (p.dim() != dim) throw Error(ErrorKind::DimensionMismatch, "summed objectives differ in dimension");
  }
  auto shared = std::make_shared<const std::vector<TimeVaryingObjective>>(std::move(parts));
  return TimeVaryingObjective(
      dim,
      [shared](double t, ConstVectorRef x) {
        double total = 0.0;
        for (const auto& p : *shared) total += p.value(t, x);
        return total;
      },
      [shared, dim](double t, ConstVectorRef x, VectorRef g) {
        Vector part(dim);
        g.setZero();
        for (const auto& p : *shared) {
          p.gradient(t, x, part);
          g += part;
        }
      },
      [shared](double t, ConstVectorRef x) {
        double total = 0.0;
        for (const auto& p : *shared) total += p.time_partial(t, x);
        return total;
      },
      "sum");
}

// The same cost frozen at a fixed time: f_t := f_{t_frozen} for every t.
inline TimeVaryingObjective make_frozen(TimeVaryingObjective obj, double t_frozen) {
  auto shared = std::make_shared<const TimeVaryingObjective>(std::move(obj));
  return TimeVaryingObjective(
      shared->dim(), [shared, t_frozen](double, ConstVectorRef x) { return shared->value(t_frozen, x); },
      [shared, t_frozen](double, ConstVectorRef x, VectorRef g) { shared->gradient(t_frozen, x, g); },
      [](double, ConstVectorRef) { return 0.0; }, shared->name() + "@frozen");
}

}  // namespace octnag
