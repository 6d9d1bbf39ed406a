#pragma once

// Log-likelihood of Lambert W x F_X models, split into the input
// log-likelihood of the back-transformed data and the transformation penalty.

#include <cmath>
#include <limits>
#include <numbers>
#include <span>

#include "heavytail/distribution.hpp"
#include "heavytail/transform.hpp"

namespace heavytail {

struct LogLik {
  double total = 0.0;
  double input = 0.0;    // sum log f_X(W_tau(y_i))
  double penalty = 0.0;  // sum log R(tau | y_i) <= 0

  bool finite() const { return std::isfinite(total) && std::isfinite(input) && std::isfinite(penalty); }
};

// log R for one standardized observation; the Lambert W value is returned via `w_out`.
inline double log_penalty(double z, double delta, double* w_out = nullptr) {
  if (delta == 0.0 || z == 0.0) {
    if (w_out) *w_out = 0.0;
    return 0.0;
  }
  const double w = detail::lambert_of_scaled_square(z, delta);
  if (w_out) *w_out = w;
  return -0.5 * w - std::log1p(w);
}

/// Log-likelihood of `data` under `dist`. A non-finite total (observation outside
/// the support, overflow) is reported through LogLik::finite() rather than thrown.
inline LogLik loglik(const LambertWDist& dist, std::span<const double> data) {
  const TailParams tau = dist.tau();
  const InputSpec& input = dist.input();
  LogLik out;
  for (double y : data) {
    const double z = (y - tau.mu_x) / tau.sigma_x;
    const double delta = tau.tail.for_side(z);
    if (delta == 0.0) {
      out.input += input.log_pdf(y);
      continue;
    }
    double w = 0.0;
    out.penalty += log_penalty(z, delta, &w);
    const double u = z == 0.0 ? 0.0 : std::copysign(std::sqrt(w / delta), z);
    out.input += input.log_pdf(u * tau.sigma_x + tau.mu_x);
  }
  out.total = out.input + out.penalty;
  if (std::isnan(out.total)) out.total = -std::numeric_limits<double>::infinity();
  return out;
}

/// Log-likelihood in delta alone for standardized Tukey h data (mu_x = 0, sigma_x = 1).
inline double loglik_delta(double delta, std::span<const double> z) {
  constexpr double kHalfLog2Pi = 0.91893853320467274178;
  double s = 0.0;
  for (double zi : z) {
    double w = 0.0;
    const double pen = log_penalty(zi, delta, &w);
    const double u2 = delta == 0.0 ? zi * zi : w / delta;
    s += -0.5 * u2 - kHalfLog2Pi + pen;
  }
  return s;
}

/// D(delta | z) = d/d delta loglik_delta
///   = sum z_i^2 W'(delta z_i^2) (W_delta(z_i)^2 / 2 - (1/2 + 1 / (1 + W(delta z_i^2)))).
///
/// z^2 W'(delta z^2) is evaluated as W_delta(z)^2 / (1 + W(delta z^2)), which
/// stays finite where delta z^2 overflows.
inline double grad_delta(double delta, std::span<const double> z) {
  double s = 0.0;
  if (delta == 0.0) {
    for (double zi : z) {
      const double z2 = zi * zi;
      s += z2 * (0.5 * z2 - 1.5);
    }
    return s;
  }
  for (double zi : z) {
    if (zi == 0.0) continue;
    const double w = detail::lambert_of_scaled_square(zi, delta);
    const double u2 = w / delta;
    const double one_w = 1.0 + w;
    s += u2 / one_w * (0.5 * u2 - (0.5 + 1.0 / one_w));
  }
  return s;
}

}  // namespace heavytail
