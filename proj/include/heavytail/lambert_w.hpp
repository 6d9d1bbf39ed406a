#pragma once

// Principal branch W0 of the Lambert W function, W(x) * exp(W(x)) = x.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "heavytail/error.hpp"

namespace heavytail {

struct SolverConfig {
  double abs_tol = 1e-14;
  int max_iter = 64;
};

// -1/e rounded to double.
inline constexpr double kBranchPoint = -0.36787944117144233;

namespace detail {

inline double w0_initial_guess(double x) {
  constexpr double e = std::numbers::e;
  if (x < -0.32) {
    const double p = std::sqrt(std::max(0.0, 2.0 * (e * x + 1.0)));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
  }
  if (x < 0.25) {
    return x * (1.0 + x * (-1.0 + x * (1.5 + x * (-8.0 / 3.0 + x * (125.0 / 24.0)))));
  }
  if (x < 20.0) {
    // Winitzki's uniform approximation.
    const double l = std::log1p(x);
    return l * (1.0 - std::log1p(l) / (2.0 + l));
  }
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

// Halley on f(w) = w e^w - x. Used for moderate x where e^w cannot overflow.
inline double w0_halley_direct(double x, double w, const SolverConfig& cfg) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < cfg.max_iter; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    // Residual at rounding level: the iteration cannot improve w further.
    if (std::fabs(f) <= 4.0 * eps * std::max(std::fabs(x), std::fabs(w * ew))) return w;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) return w;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double dw = f / denom;
    w -= dw;
    if (w < -1.0) w = -1.0;
    if (std::fabs(dw) <= cfg.abs_tol * std::max(1.0, std::fabs(w))) return w;
  }
  const double residual = w * std::exp(w) - x;
  if (std::fabs(residual) <= cfg.abs_tol * std::max(1.0, std::fabs(x))) return w;
  throw ConvergenceError("lambert_w0: no convergence for x = " + std::to_string(x));
}

// Halley on g(w) = w + log(w) - log_x; avoids forming e^w for large x.
inline double w0_halley_log(double log_x, double w, const SolverConfig& cfg) {
  for (int it = 0; it < cfg.max_iter; ++it) {
    const double g = w + std::log(w) - log_x;
    const double g1 = 1.0 + 1.0 / w;
    const double g2 = -1.0 / (w * w);
    const double dw = g / (g1 - g * g2 / (2.0 * g1));
    w -= dw;
    if (std::fabs(dw) <= cfg.abs_tol * std::max(1.0, std::fabs(w))) return w;
  }
  const double residual = w + std::log(w) - log_x;
  if (std::fabs(residual) <= cfg.abs_tol * std::max(1.0, std::fabs(log_x))) return w;
  throw ConvergenceError("lambert_w0: no convergence for log x = " + std::to_string(log_x));
}

}  // namespace detail

/// Principal branch W0(x) for x >= -1/e.
///
/// Arguments up to `cfg.abs_tol` below the branch point are clamped to it and
/// return -1. Throws DomainError further below, ConvergenceError if Halley
/// iteration does not settle within `cfg.max_iter` steps.
inline double lambert_w0(double x, const SolverConfig& cfg = {}) {
  if (std::isnan(x)) throw DomainError("lambert_w0: NaN argument");
  if (x == 0.0) return 0.0;
  if (x <= kBranchPoint) {
    if (x >= kBranchPoint - cfg.abs_tol) return -1.0;
    throw DomainError("lambert_w0: argument below -1/e: " + std::to_string(x));
  }
  if (std::isinf(x)) return x;
  const double w = detail::w0_initial_guess(x);
  if (x > 3.0) return detail::w0_halley_log(std::log(x), w, cfg);
  return detail::w0_halley_direct(x, w, cfg);
}

/// W0(exp(log_x)), usable when exp(log_x) itself would overflow.
inline double lambert_w0_of_exp(double log_x, const SolverConfig& cfg = {}) {
  if (std::isnan(log_x)) throw DomainError("lambert_w0_of_exp: NaN argument");
  if (log_x < 600.0) return lambert_w0(std::exp(log_x), cfg);
  if (std::isinf(log_x)) return log_x;
  const double l2 = std::log(log_x);
  return detail::w0_halley_log(log_x, log_x - l2 + l2 / log_x, cfg);
}

/// dW0/dx = W(x) / (x (1 + W(x))), with the limit 1 at x = 0.
inline double lambert_w0_prime(double x, const SolverConfig& cfg = {}) {
  if (std::isnan(x) || x <= kBranchPoint) {
    throw DomainError("lambert_w0_prime: argument at or below -1/e");
  }
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double w = lambert_w0(x, cfg);
  return w / (x * (1.0 + w));
}

}  // namespace heavytail
