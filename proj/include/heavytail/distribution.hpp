#pragma once

// Heavy-tail Lambert W x F_X distributions and closed-form Tukey h moments.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>

#include "heavytail/error.hpp"
#include "heavytail/input.hpp"
#include "heavytail/transform.hpp"

namespace heavytail {

class LambertWDist {
 public:
  LambertWDist(InputSpec input, Tail tail) : input_(std::move(input)), tail_(tail) { tail_.validate(); }

  const InputSpec& input() const { return input_; }
  const Tail& tail() const { return tail_; }

  TailParams tau() const {
    const auto [mu, sigma] = input_.location_scale();
    return TailParams{mu, sigma, tail_};
  }

  double cdf(double y) const { return input_.cdf(w_tau(y, tau())); }

  double pdf(double y) const { return std::exp(log_pdf(y)); }

  double log_pdf(double y) const {
    const TailParams t = tau();
    const double z = (y - t.mu_x) / t.sigma_x;
    const double delta = t.tail.for_side(z);
    if (delta == 0.0) return input_.log_pdf(y);
    const double w = detail::lambert_of_scaled_square(z, delta);
    const double u = z == 0.0 ? 0.0 : std::copysign(std::sqrt(w / delta), z);
    // log of d/dy W_tau(y) = exp(-W/2) / (1 + W).
    return input_.log_pdf(u * t.sigma_x + t.mu_x) - 0.5 * w - std::log1p(w);
  }

  double quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
    return h_tau(input_.quantile(p), tau());
  }

 private:
  InputSpec input_;
  Tail tail_;
};

// Tukey's h: Gaussian input with a symmetric tail.
inline LambertWDist tukey_h(double mu_x, double sigma_x, double delta) {
  return LambertWDist(InputSpec(Gaussian{mu_x, sigma_x}), Tail::symmetric(delta));
}

/// Density of a heavy-tail Lambert W x t_nu variable whose latent X has mean
/// tau.mu_x and standard deviation tau.sigma_x.
///
/// W_delta(v) is a unit-variance t variate; it is rescaled by sqrt(nu/(nu-2))
/// to an ordinary t_nu before the density is evaluated, and the Jacobian of
/// that rescaling is included.
inline double pdf_student_t_input(double nu, const TailParams& tau, double z) {
  if (!(nu > 2.0)) throw DomainError("pdf_student_t_input: nu must be > 2");
  if (tau.tail.is_double()) throw DomainError("pdf_student_t_input: symmetric tail only");
  tau.validate();
  const double delta = tau.tail.delta();
  const double v = (z - tau.mu_x) / tau.sigma_x;
  const double w = delta == 0.0 ? 0.0 : detail::lambert_of_scaled_square(v, delta);
  const double u = w_delta(v, delta);
  const double to_t = std::sqrt(nu / (nu - 2.0));
  const double t = u * to_t;
  const double log_ft = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                        0.5 * std::log(nu * std::numbers::pi) - 0.5 * (nu + 1.0) * std::log1p(t * t / nu);
  return std::exp(log_ft - 0.5 * w - std::log1p(w)) * to_t / tau.sigma_x;
}

/// E Z^n for standard Gaussian input; nullopt when the moment does not exist
/// (n >= 1/delta, the boundary n = 1/delta included).
inline std::optional<double> moment_gaussian(int n, double delta) {
  if (n < 1) throw DomainError("moment_gaussian: n must be >= 1");
  if (!(delta >= 0.0)) throw DomainError("moment_gaussian: delta must be >= 0");
  if (n * delta >= 1.0) return std::nullopt;
  if (n % 2 == 1) return 0.0;
  // n! / (2^{n/2} (n/2)!) = (n-1)!!
  double double_factorial = 1.0;
  for (int k = n - 1; k > 1; k -= 2) double_factorial *= k;
  return double_factorial * std::pow(1.0 - n * delta, -0.5 * (n + 1));
}

/// gamma_2(delta) = 3 (1 - 2 delta)^3 / (1 - 4 delta)^{5/2}, finite for delta < 1/4.
inline std::optional<double> kurtosis_gaussian(double delta) {
  if (!(delta >= 0.0)) throw DomainError("kurtosis_gaussian: delta must be >= 0");
  if (delta >= 0.25) return std::nullopt;
  return 3.0 * std::pow(1.0 - 2.0 * delta, 3.0) / std::pow(1.0 - 4.0 * delta, 2.5);
}

/// sigma_y / sigma_x = (1 - 2 delta)^{-3/4}, finite for delta < 1/2.
inline std::optional<double> variance_factor(double delta) {
  if (!(delta >= 0.0)) throw DomainError("variance_factor: delta must be >= 0");
  if (delta >= 0.5) return std::nullopt;
  return std::pow(1.0 - 2.0 * delta, -0.75);
}

inline std::optional<double> kurtosis_student_t(double nu) {
  if (!(nu > 4.0)) return std::nullopt;
  return 3.0 * (nu - 2.0) / (nu - 4.0);
}

// 1/delta; infinite for Gaussian tails.
inline double tail_index(double delta) {
  if (!(delta >= 0.0)) throw DomainError("tail_index: delta must be >= 0");
  if (delta == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / delta;
}

}  // namespace heavytail
