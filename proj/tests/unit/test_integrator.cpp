#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "octnag/integrator.hpp"

using namespace octnag;
using std::numbers::pi;

namespace {

OdeProblem decay(double t_end = 1.0) {
  return {[](double, ConstVectorRef y, VectorRef dy) { dy = -y; }, 0.0, t_end, Vector::Ones(1)};
}

OdeProblem oscillator(double t_end = 2 * pi) {
  return {[](double, ConstVectorRef y, VectorRef dy) {
            dy(0) = y(1);
            dy(1) = -y(0);
          },
          0.0, t_end, (Vector(2) << 1, 0).finished()};
}

SolverConfig with_tol(double rel, Method method = Method::DormandPrince45) {
  SolverConfig c;
  c.rel_tol = rel;
  c.abs_tol = rel * 1e-3;
  c.method = method;
  return c;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidParameter;
}

}  // namespace

TEST(Integrate, ExponentialDecay) {
  const Trajectory tr = integrate(decay(), SolverConfig{});
  EXPECT_NEAR(tr.states(tr.states.rows() - 1, 0), std::exp(-1.0), 1e-6 * std::exp(-1.0));
  EXPECT_EQ(tr.times.front(), 0.0);
  EXPECT_EQ(tr.times.back(), 1.0);
  EXPECT_EQ(tr.size(), 101u);
  EXPECT_EQ(tr.states.rows(), 101);
  for (std::size_t k = 1; k < tr.size(); ++k) EXPECT_GT(tr.times[k], tr.times[k - 1]);
}

TEST(Integrate, ConstantSolutionExact) {
  const OdeProblem p{[](double, ConstVectorRef, VectorRef dy) { dy.setZero(); }, 0.0, 3.0,
                     (Vector(3) << 1.5, -2, 7).finished()};
  for (Method m : {Method::DormandPrince45, Method::TrBdf2}) {
    SolverConfig c;
    c.method = m;
    const Trajectory tr = integrate(p, c);
    for (std::size_t k = 0; k < tr.size(); ++k) EXPECT_EQ(tr.state(k), p.y0);
  }
}

TEST(Integrate, HarmonicOscillatorReturns) {
  const Trajectory tr = integrate(oscillator(), SolverConfig{});
  EXPECT_LE((tr.state(tr.size() - 1) - oscillator().y0).norm(), 1e-5);
  // interior samples follow cos/sin
  for (std::size_t k = 0; k < tr.size(); k += 10) {
    EXPECT_NEAR(tr.states(Eigen::Index(k), 0), std::cos(tr.times[k]), 1e-5);
    EXPECT_NEAR(tr.states(Eigen::Index(k), 1), -std::sin(tr.times[k]), 1e-5);
  }
}

TEST(Integrate, TrBdf2Accuracy) {
  const Trajectory tr = integrate(oscillator(), with_tol(1e-8, Method::TrBdf2));
  EXPECT_LE((tr.state(tr.size() - 1) - oscillator().y0).norm(), 1e-5);
  const Trajectory d = integrate(decay(), with_tol(1e-8, Method::TrBdf2));
  EXPECT_NEAR(d.states(d.states.rows() - 1, 0), std::exp(-1.0), 1e-6);
}

TEST(Integrate, TrBdf2HandlesStiffRelaxation) {
  // y' = -1e6 (y - cos t): explicit stepping would need ~1e6 steps per unit time
  const OdeProblem p{[](double t, ConstVectorRef y, VectorRef dy) { dy(0) = -1e6 * (y(0) - std::cos(t)); }, 0.0, 2.0,
                     Vector::Zero(1)};
  SolverConfig c = with_tol(1e-7, Method::TrBdf2);
  const Trajectory tr = integrate(p, c);
  EXPECT_LT(tr.stats.accepted_steps, 20000);
  EXPECT_NEAR(tr.states(tr.states.rows() - 1, 0), std::cos(2.0) + std::sin(2.0) * 1e-6, 1e-6);

  SolverConfig explicit_cfg = with_tol(1e-7);
  explicit_cfg.max_rhs_evals = 100000;
  EXPECT_EQ(kind_of([&] { integrate(p, explicit_cfg); }), ErrorKind::BudgetExceeded);
}

TEST(OrderCheck, ExponentialAndOscillator) {
  const auto e = order_check(decay(), Vector::Constant(1, std::exp(-1.0)), 0.1);
  ASSERT_TRUE(e.order.has_value());
  EXPECT_GE(*e.order, 4.5);
  EXPECT_LE(*e.order, 5.5);

  const auto o = order_check(oscillator(), oscillator().y0, 2 * pi / 20);
  ASSERT_TRUE(o.order.has_value());
  EXPECT_GE(*o.order, 4.5);
  EXPECT_LE(*o.order, 5.5);
}

TEST(OrderCheck, ZeroFieldNotApplicable) {
  const OdeProblem p{[](double, ConstVectorRef, VectorRef dy) { dy.setZero(); }, 0.0, 1.0, Vector::Ones(1)};
  const auto e = order_check(p, Vector::Ones(1), 0.1);
  EXPECT_FALSE(e.order.has_value());
  EXPECT_EQ(e.error_coarse, 0.0);
  EXPECT_EQ(e.error_fine, 0.0);
}

TEST(Integrate, Errors) {
  const OdeProblem blowup{[](double, ConstVectorRef y, VectorRef dy) { dy(0) = y(0) * y(0); }, 0.0, 2.0,
                          Vector::Ones(1)};
  const ErrorKind k = kind_of([&] { integrate(blowup, SolverConfig{}); });
  EXPECT_TRUE(k == ErrorKind::StepSizeUnderflow || k == ErrorKind::NonFiniteState) << to_string(k);

  SolverConfig tiny;
  tiny.max_rhs_evals = 50;
  EXPECT_EQ(kind_of([&] { integrate(oscillator(100.0), tiny); }), ErrorKind::BudgetExceeded);

  const OdeProblem nan_rhs{[](double t, ConstVectorRef, VectorRef dy) { dy(0) = t > 0.5 ? NAN : 1.0; }, 0.0, 1.0,
                           Vector::Zero(1)};
  try {
    integrate(nan_rhs, SolverConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.kind() == ErrorKind::NonFiniteState || e.kind() == ErrorKind::StepSizeUnderflow);
    EXPECT_NE(std::string(e.what()).find("t="), std::string::npos);
  }

  SolverConfig bad;
  bad.rel_tol = 0;
  EXPECT_EQ(kind_of([&] { integrate(decay(), bad); }), ErrorKind::InvalidParameter);
  bad = SolverConfig{};
  bad.sample_count = 1;
  EXPECT_EQ(kind_of([&] { integrate(decay(), bad); }), ErrorKind::InvalidParameter);
  OdeProblem backwards = decay();
  backwards.t_end = -1;
  EXPECT_EQ(kind_of([&] { integrate(backwards, SolverConfig{}); }), ErrorKind::InvalidParameter);
}

TEST(IntegrateProperty, TighterToleranceNeverWorse) {
  for (const auto& [problem, exact] : {std::pair<OdeProblem, Vector>{decay(5.0), Vector::Constant(1, std::exp(-5.0))},
                                       std::pair<OdeProblem, Vector>{oscillator(), oscillator().y0}}) {
    double previous_error = INFINITY;
    std::int64_t previous_evals = 0;
    for (double rel = 1e-4; rel >= 1e-7 * 0.99; rel /= 2) {
      SolverConfig c = with_tol(rel);
      c.max_step = problem.t_end;  // let the tolerance alone pick the steps
      const Trajectory tr = integrate(problem, c);
      const double err = (tr.state(tr.size() - 1) - exact).norm();
      EXPECT_LE(err, previous_error * (1 + 1e-12)) << "rel_tol=" << rel;
      EXPECT_GE(tr.stats.rhs_evaluations, previous_evals);
      previous_error = err;
      previous_evals = tr.stats.rhs_evaluations;
    }
  }
}

TEST(IntegrateProperty, DenseSamplesMatchDirectIntegration) {
  const double rel = 1e-7;
  for (Method m : {Method::DormandPrince45, Method::TrBdf2}) {
    SolverConfig c = with_tol(rel, m);
    c.sample_count = 21;
    const Trajectory tr = integrate(oscillator(), c);
    for (std::size_t k = 1; k < tr.size(); ++k) {
      OdeProblem stop = oscillator(tr.times[k]);
      SolverConfig direct = c;
      direct.sample_count = 2;
      direct.max_step = c.resolved_max_step(2 * pi);
      const Trajectory d = integrate(stop, direct);
      EXPECT_LE((tr.state(k) - d.state(1)).norm(), 10 * rel) << to_string(m) << " t=" << tr.times[k];
    }
  }
}

TEST(IntegrateProperty, DenseOutputObjectAgreesWithSamples) {
  SolverConfig c = with_tol(1e-8);
  c.keep_dense = true;
  const Trajectory tr = integrate(oscillator(), c);
  ASSERT_TRUE(tr.dense);
  for (std::size_t k = 0; k < tr.size(); k += 7) EXPECT_LE((tr.at(tr.times[k]) - tr.state(k)).norm(), 1e-12);
  const double t = 1.2345;
  EXPECT_NEAR(tr.at(t)(0), std::cos(t), 1e-7);
}

TEST(IntegrateProperty, RhsEvaluationsGrowWithTighterTolerance) {
  const auto loose = integrate(oscillator(20.0), with_tol(1e-4));
  const auto tight = integrate(oscillator(20.0), with_tol(1e-9));
  EXPECT_GT(tight.stats.rhs_evaluations, loose.stats.rhs_evaluations);
  EXPECT_GT(tight.stats.accepted_steps, loose.stats.accepted_steps);
  EXPECT_LE(tight.stats.min_step, tight.stats.max_step);
}
