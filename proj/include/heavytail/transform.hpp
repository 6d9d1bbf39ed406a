#pragma once

// Heavy-tail transform u -> u exp(delta u^2 / 2) and its Lambert W inverse.

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "heavytail/error.hpp"
#include "heavytail/lambert_w.hpp"

namespace heavytail {

// Tail parameters of the transform. A symmetric tail stores the same delta on
// both sides, so Symmetric(d) and DoubleTail(d, d) take identical code paths.
class Tail {
 public:
  Tail() = default;

  static Tail symmetric(double delta) { return Tail(delta, delta, false); }
  static Tail double_tail(double left, double right) { return Tail(left, right, true); }

  double left() const { return left_; }
  double right() const { return right_; }
  bool is_double() const { return double_; }
  // The symmetric delta (left == right for symmetric tails).
  double delta() const { return left_; }

  // Negative and zero arguments belong to the left branch.
  double for_side(double u) const { return u <= 0.0 ? left_ : right_; }

  bool is_zero() const { return left_ == 0.0 && right_ == 0.0; }

  void validate() const {
    if (!(left_ >= 0.0) || !(right_ >= 0.0) || !std::isfinite(left_) || !std::isfinite(right_)) {
      throw DomainError("tail parameters must be finite and >= 0");
    }
  }

  friend bool operator==(const Tail&, const Tail&) = default;

 private:
  Tail(double l, double r, bool d) : left_(l), right_(r), double_(d) {}

  double left_ = 0.0;
  double right_ = 0.0;
  bool double_ = false;
};

struct TailParams {
  double mu_x = 0.0;
  double sigma_x = 1.0;
  Tail tail;

  void validate() const {
    if (!std::isfinite(mu_x)) throw DomainError("mu_x must be finite");
    if (!(sigma_x > 0.0) || !std::isfinite(sigma_x)) throw DomainError("sigma_x must be > 0");
    tail.validate();
  }

  friend bool operator==(const TailParams&, const TailParams&) = default;
};

/// u * exp(delta/2 * u^2). Overflows to +-inf for extreme arguments.
inline double h_delta(double u, double delta) {
  if (delta == 0.0) return u;
  return u * std::exp(0.5 * delta * u * u);
}

namespace detail {

// W(delta z^2), switching to the log argument when delta z^2 overflows.
inline double lambert_of_scaled_square(double z, double delta) {
  const double arg = delta * z * z;
  if (std::isfinite(arg)) return lambert_w0(arg);
  return lambert_w0_of_exp(std::log(delta) + 2.0 * std::log(std::fabs(z)));
}

}  // namespace detail

/// Inverse of h_delta: sgn(z) sqrt(W(delta z^2) / delta).
inline double w_delta(double z, double delta) {
  if (delta == 0.0 || z == 0.0) return z;
  const double w = detail::lambert_of_scaled_square(z, delta);
  return std::copysign(std::sqrt(w / delta), z);
}

inline double h_tau(double x, const TailParams& tau) {
  const double u = (x - tau.mu_x) / tau.sigma_x;
  const double delta = tau.tail.for_side(u);
  if (delta == 0.0) return x;
  return h_delta(u, delta) * tau.sigma_x + tau.mu_x;
}

inline double w_tau(double y, const TailParams& tau) {
  const double z = (y - tau.mu_x) / tau.sigma_x;
  const double delta = tau.tail.for_side(z);
  if (delta == 0.0) return y;
  return w_delta(z, delta) * tau.sigma_x + tau.mu_x;
}

inline std::vector<double> h_tau(std::span<const double> x, const TailParams& tau) {
  std::vector<double> out;
  out.reserve(x.size());
  for (double v : x) out.push_back(h_tau(v, tau));
  return out;
}

inline std::vector<double> w_tau(std::span<const double> y, const TailParams& tau) {
  std::vector<double> out;
  out.reserve(y.size());
  for (double v : y) out.push_back(w_tau(v, tau));
  return out;
}

// Generalized pair u exp(delta/(2 alpha) (u^2)^alpha); alpha = 1 is h_delta.
inline double h_alpha(double u, double delta, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("h_alpha: alpha must be > 0");
  if (alpha == 1.0) return h_delta(u, delta);
  if (delta == 0.0) return u;
  return u * std::exp(delta / (2.0 * alpha) * std::pow(u * u, alpha));
}

inline double w_alpha(double z, double delta, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("w_alpha: alpha must be > 0");
  if (alpha == 1.0) return w_delta(z, delta);
  if (delta == 0.0 || z == 0.0) return z;
  const double w = lambert_w0(delta * std::pow(z * z, alpha));
  return std::copysign(std::pow(w / delta, 1.0 / (2.0 * alpha)), z);
}

/// d W_delta(z) / dz = exp(-W(delta z^2)/2) / (1 + W(delta z^2)).
inline double w_delta_dz(double z, double delta) {
  if (delta == 0.0 || z == 0.0) return 1.0;
  const double w = detail::lambert_of_scaled_square(z, delta);
  return std::exp(-0.5 * w) / (1.0 + w);
}

/// d W_delta(z)^2 / d delta = -W_delta(z)^4 / (1 + W(delta z^2)); -z^4 at delta = 0.
inline double w_delta_sq_ddelta(double z, double delta) {
  if (delta == 0.0) return -z * z * z * z;
  if (z == 0.0) return 0.0;
  const double w = detail::lambert_of_scaled_square(z, delta);
  const double u2 = w / delta;
  return -u2 * u2 / (1.0 + w);
}

/// d W_delta(z) / d delta = -W_delta(z)^3 / (2 (1 + W(delta z^2))); -z^3/2 at delta = 0.
inline double w_delta_ddelta(double z, double delta) {
  if (delta == 0.0) return -0.5 * z * z * z;
  if (z == 0.0) return 0.0;
  const double w = detail::lambert_of_scaled_square(z, delta);
  const double u = std::copysign(std::sqrt(w / delta), z);
  return -0.5 * u * u * u / (1.0 + w);
}

}  // namespace heavytail
