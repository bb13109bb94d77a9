#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "octnag/error.hpp"
#include "octnag/objective.hpp"

namespace octnag {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // Richardson estimate |I_h - I_2h| / 3
};

// Composite trapezoid over samples (times[k], values[k]) restricted to
// [times[0], upper]; a final partial interval is linearly interpolated.
inline QuadratureResult trapezoid(std::span<const double> times, std::span<const double> values, double upper) {
  if (times.size() != values.size() || times.size() < 2) {
    throw Error(ErrorKind::DimensionMismatch, "trapezoid needs matching samples (at least two)");
  }
  const double snap = 1e-9 * (times.back() - times.front());
  if (upper > times.back() + snap || upper < times.front()) {
    throw Error(ErrorKind::InvalidParameter, "integration limit outside the sampled range");
  }
  std::size_t last = 0;
  while (last + 1 < times.size() && times[last + 1] <= upper + snap) ++last;

  QuadratureResult out;
  double fine = 0.0;
  for (std::size_t k = 0; k < last; ++k) fine += 0.5 * (times[k + 1] - times[k]) * (values[k] + values[k + 1]);
  double coarse = 0.0;
  std::size_t k = 0;
  for (; k + 2 <= last; k += 2) coarse += 0.5 * (times[k + 2] - times[k]) * (values[k] + values[k + 2]);
  for (; k < last; ++k) coarse += 0.5 * (times[k + 1] - times[k]) * (values[k] + values[k + 1]);

  double tail = 0.0;
  if (last + 1 < times.size() && upper > times[last] + snap) {
    const double w = (upper - times[last]) / (times[last + 1] - times[last]);
    const double f_upper = (1.0 - w) * values[last] + w * values[last + 1];
    tail = 0.5 * (upper - times[last]) * (values[last] + f_upper);
  }
  out.value = fine + tail;
  out.error_estimate = last >= 2 ? std::abs(fine - coarse) / 3.0 : 0.0;
  return out;
}

// Romberg integration of a vector-valued integrand over [a, b]. The base
// mesh uses at least one panel per time unit; convergence requires two
// consecutive diagonal entries within abs_tol (max norm).
inline Vector romberg(const std::function<Vector(double)>& integrand, double a, double b, double abs_tol,
                      int max_levels = 22) {
  const auto panels0 = static_cast<long>(std::max(1.0, std::ceil(b - a)));
  std::vector<std::vector<Vector>> table;
  auto trapezoid_level = [&](long panels, const Vector* previous) {
    const double h = (b - a) / double(panels);
    if (previous == nullptr) {
      Vector sum = 0.5 * (integrand(a) + integrand(b));
      for (long i = 1; i < panels; ++i) sum += integrand(a + h * double(i));
      return Vector(h * sum);
    }
    Vector mid = Vector::Zero(previous->size());
    for (long i = 1; i < panels; i += 2) mid += integrand(a + h * double(i));
    return Vector(0.5 * (*previous) + h * mid);
  };

  long panels = panels0;
  table.push_back({trapezoid_level(panels, nullptr)});
  int agreements = 0;
  for (int level = 1; level < max_levels; ++level) {
    panels *= 2;
    std::vector<Vector> row{trapezoid_level(panels, &table.back()[0])};
    double factor = 1.0;
    for (int j = 1; j <= level; ++j) {
      factor *= 4.0;
      row.push_back(row[j - 1] + (row[j - 1] - table.back()[j - 1]) / (factor - 1.0));
    }
    const double change = (row.back() - table.back().back()).lpNorm<Eigen::Infinity>();
    table.push_back(std::move(row));
    agreements = change <= abs_tol ? agreements + 1 : 0;
    if (agreements >= 2) return table.back().back();
  }
  throw Error(ErrorKind::QuadratureFailure, "Romberg integration did not reach the requested tolerance");
}

}  // namespace octnag
