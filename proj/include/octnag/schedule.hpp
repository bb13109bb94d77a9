#pragma once
//
// Time-varying damping/scaling parameters (alpha_t, beta_t) for the
// accelerated online dynamics.
//
// Both families fix e^{beta_t} = (t + b0)^m and pick e^{alpha_t} so that
//
//     e^{alpha_t + beta_t} - beta_dot_t e^{beta_t} = sigma (t + b0)^p
//
// holds identically, with p = 0 for the constant-sigma family.

#include <cmath>
#include <sstream>
#include <string>

#include "octnag/error.hpp"

namespace octnag {

enum class ScalingFamily { ConstantSigma, PolynomialSigma };

inline const char* to_string(ScalingFamily family) {
  return family == ScalingFamily::ConstantSigma ? "constant_sigma" : "polynomial_sigma";
}

struct ScheduleValues {
  double e_alpha;
  double alpha_dot;
  double e_beta;
  double beta_dot;

  // e^{2 alpha + beta}, formed as e^alpha * (e^alpha e^beta) so that the
  // product does not overflow before the final value does.
  double e_2alpha_beta() const { return e_alpha * (e_alpha * e_beta); }
};

class ScalingSchedule {
 public:
  // Margin used to enforce the strict lower bound on b0.
  static constexpr double kStrictMargin = 1e-12;

  ScalingSchedule(ScalingFamily family, double m, double sigma, double b0, double p = 0.0)
      : family_(family), m_(m), sigma_(sigma), b0_(b0),
        p_(family == ScalingFamily::ConstantSigma ? 0.0 : p) {
    validate(p);
  }

  static ScalingSchedule constant_sigma(double m, double sigma, double b0) {
    return {ScalingFamily::ConstantSigma, m, sigma, b0, 0.0};
  }

  static ScalingSchedule polynomial_sigma(double m, double sigma, double b0, double p) {
    return {ScalingFamily::PolynomialSigma, m, sigma, b0, p};
  }

  ScalingFamily family() const { return family_; }
  double m() const { return m_; }
  double sigma() const { return sigma_; }
  double b0() const { return b0_; }
  double p() const { return p_; }

  // Smallest admissible b0 (exclusive) for the given constants.
  static double b0_threshold(double m, double sigma, double p) {
    return std::pow(-m / sigma, 1.0 / (1.0 - m + p));
  }

  ScheduleValues eval(double t) const {
    if (!(t >= 0.0)) {
      throw Error(ErrorKind::InvalidParameter, "schedule evaluated at negative time");
    }
    const double s = t + b0_;
    const double log_s = std::log(s);
    ScheduleValues out{};
    out.e_beta = std::exp(m_ * log_s);
    out.beta_dot = m_ / s;
    const double growth = sigma_ * std::exp((p_ - m_) * log_s);
    out.e_alpha = m_ / s + growth;
    out.alpha_dot = (-m_ / (s * s) - (m_ - p_) * growth / s) / out.e_alpha;
    if (!std::isfinite(out.e_alpha) || !std::isfinite(out.alpha_dot) ||
        !std::isfinite(out.e_2alpha_beta())) {
      std::ostringstream msg;
      msg << "schedule values overflow at t=" << t << " (m=" << m_ << ", sigma=" << sigma_ << ")";
      throw Error(ErrorKind::Overflow, msg.str());
    }
    return out;
  }

  // sigma (t + b0)^p, the right-hand side of the scaling condition.
  double scaling_target(double t) const { return sigma_ * std::exp(p_ * std::log(t + b0_)); }

  double scaling_residual(double t) const {
    const ScheduleValues v = eval(t);
    return v.e_alpha * v.e_beta - v.beta_dot * v.e_beta - scaling_target(t);
  }

  // Extra conditions required by the distributed analysis: b0 >= 1 and
  // m <= -2 m0 for the gradient growth exponent m0 of the local costs.
  bool satisfies_distributed_conditions(double m0) const { return b0_ >= 1.0 && m_ <= -2.0 * m0; }

 private:
  void validate(double p_requested) const {
    auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidParameter, what); };
    if (!std::isfinite(m_) || !std::isfinite(sigma_) || !std::isfinite(b0_) ||
        !std::isfinite(p_requested)) {
      fail("schedule parameters must be finite");
    }
    if (!(m_ < 0.0)) fail("m must be negative");
    if (!(sigma_ > 0.0)) fail("sigma must be positive");
    if (!(b0_ > 0.0)) fail("b0 must be positive");
    if (family_ == ScalingFamily::PolynomialSigma && !(p_ >= 1.0)) fail("p must be at least 1");
    const double threshold = b0_threshold(m_, sigma_, p_);
    if (!(b0_ >= threshold + kStrictMargin)) {
      std::ostringstream msg;
      msg.precision(12);
      if (family_ == ScalingFamily::ConstantSigma) {
        msg << "b0 must exceed (-m/sigma)^{1/(1-m)} = " << threshold;
      } else {
        msg << "b0 must exceed (-m/sigma)^{1/(1-m+p)} = " << threshold;
      }
      fail(msg.str());
    }
  }

  ScalingFamily family_;
  double m_;
  double sigma_;
  double b0_;
  double p_;
};

}  // namespace octnag
