#pragma once

// Anderson-Darling test of composite normality (mean and variance estimated).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "heavytail/error.hpp"
#include "heavytail/sample_stats.hpp"

namespace heavytail {

struct NormalityTest {
  double statistic = 0.0;  // small-sample adjusted A*^2
  double p_value = 1.0;
};

namespace detail {

// log(erfc(t)) without underflow for large t.
inline double log_erfc(double t) {
  if (t < 25.0) return std::log(std::erfc(t));
  const double t2 = t * t;
  const double series = 1.0 - 0.5 / t2 + 0.75 / (t2 * t2) - 1.875 / (t2 * t2 * t2);
  return -t2 - std::log(t * std::sqrt(std::numbers::pi)) + std::log(series);
}

inline double log_normal_cdf(double z) { return std::log(0.5) + log_erfc(-z / std::numbers::sqrt2); }

}  // namespace detail

/// A*^2 = A^2 (1 + 0.75/n + 2.25/n^2) with the D'Agostino-Stephens p-value
/// approximation. Beyond A* = 153.467 the upper-tail quadratic turns upwards,
/// so the statistic is capped there for the p-value.
inline NormalityTest anderson_darling(std::span<const double> x) {
  if (x.size() < 8) throw InsufficientDataError("anderson_darling: need at least 8 values");
  const double m = sample_mean(x);
  const double s = sample_sd(x);
  if (!(s > 0.0)) throw InsufficientDataError("anderson_darling: constant series");
  std::vector<double> z(x.begin(), x.end());
  for (double& v : z) v = (v - m) / s;
  std::sort(z.begin(), z.end());
  const std::size_t n = z.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = detail::log_normal_cdf(z[i]);
    const double hi = detail::log_normal_cdf(-z[n - 1 - i]);
    acc += (2.0 * static_cast<double>(i) + 1.0) * (lo + hi);
  }
  const auto nd = static_cast<double>(n);
  const double a2 = -nd - acc / nd;
  const double a = a2 * (1.0 + 0.75 / nd + 2.25 / (nd * nd));

  double p = 0.0;
  if (a >= 0.6) {
    const double ac = std::min(a, 153.467);
    p = std::exp(1.2937 - 5.709 * ac + 0.0186 * ac * ac);
  } else if (a >= 0.34) {
    p = std::exp(0.9177 - 4.279 * a - 1.38 * a * a);
  } else if (a >= 0.2) {
    p = 1.0 - std::exp(-8.318 + 42.796 * a - 59.938 * a * a);
  } else {
    p = 1.0 - std::exp(-13.436 + 101.14 * a - 223.73 * a * a);
  }
  return {a, std::clamp(p, 0.0, 1.0)};
}

}  // namespace heavytail
