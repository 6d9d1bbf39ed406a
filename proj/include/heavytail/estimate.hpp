#pragma once

// Estimators for the tail parameters: delta-only and joint maximum likelihood,
// the Taylor rule of thumb, kurtosis matching (delta_gmm) and IGMM.

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heavytail/distribution.hpp"
#include "heavytail/error.hpp"
#include "heavytail/likelihood.hpp"
#include "heavytail/optim.hpp"
#include "heavytail/sample_stats.hpp"
#include "heavytail/transform.hpp"

namespace heavytail {

enum class BoundaryHit { kNone, kDeltaLower, kDeltaUpper };

enum class TailKind { kSymmetric, kDoubleTail };

struct ParamEstimate {
  std::string name;
  double value = 0.0;
  // NaN when unavailable (parameter on the boundary, moment estimators).
  double std_error = std::numeric_limits<double>::quiet_NaN();
};

struct FitResult {
  std::string method;
  TailParams tau;
  InputSpec input;  // Gaussian(mu_x, sigma_x) unless a different family was fitted
  std::vector<ParamEstimate> estimates;
  LogLik loglik;
  int iterations = 0;
  bool converged = false;
  BoundaryHit boundary_hit = BoundaryHit::kNone;

  LambertWDist dist() const { return LambertWDist(input, tau.tail); }

  const ParamEstimate* find(const std::string& name) const {
    for (const auto& e : estimates) {
      if (e.name == name) return &e;
    }
    return nullptr;
  }
};

struct IGMMConfig {
  double tol = 1.22e-4;
  double delta_lower = 0.0;
  double delta_upper = 10.0;
  int max_iterations = 100;
  double target_kurtosis = 3.0;

  void validate() const {
    if (!(tol > 0.0)) throw DomainError("IGMMConfig: tol must be > 0");
    if (!(delta_lower >= 0.0 && delta_lower < delta_upper)) throw DomainError("IGMMConfig: bad delta bounds");
    if (max_iterations < 1) throw DomainError("IGMMConfig: max_iterations must be >= 1");
  }
};

inline constexpr std::size_t kMinFitSize = 10;

/// Rule-of-thumb delta from a sample kurtosis, inverting 3 + 12 d + 66 d^2.
inline double taylor_delta(double sample_kurtosis) {
  const double disc = 66.0 * sample_kurtosis - 162.0;
  if (!(disc >= 0.0)) return 0.0;
  return std::max(0.0, (std::sqrt(disc) - 6.0) / 66.0);
}

namespace detail {

inline void require_fit_data(std::span<const double> y, std::size_t min_n = kMinFitSize) {
  if (y.size() < min_n) {
    throw InsufficientDataError("insufficient data: need at least " + std::to_string(min_n) + " observations, got " +
                                std::to_string(y.size()));
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw DomainError("data contains non-finite values");
  }
  const double sd = sample_sd(y);
  if (!(sd > 0.0)) throw InsufficientDataError("insufficient data: zero variance");
  if (!std::isfinite(sd)) throw DomainError("data range too wide: sample variance overflows");
}

struct DeltaRoot {
  double delta = 0.0;
  bool boundary = false;
  int evaluations = 0;
};

// Positive root of D(delta | z) when sum z^4 / sum z^2 > 3, otherwise 0.
inline DeltaRoot delta_mle_root(std::span<const double> z, double hint = 0.0) {
  double s2 = 0.0, s4 = 0.0;
  for (double v : z) {
    s2 += v * v;
    s4 += v * v * v * v;
  }
  if (!(s2 > 0.0) || s4 <= 3.0 * s2) return {0.0, true, 0};
  int evals = 0;
  auto d = [&](double delta) {
    ++evals;
    const double g = grad_delta(delta, z);
    if (std::isnan(g)) throw OverflowRegionError("grad_delta is not finite at delta = " + std::to_string(delta));
    return g;
  };
  double guess = hint > 0.0 ? hint : 0.1;
  double lo = 0.0, hi = 0.0;
  if (d(guess) > 0.0) {
    lo = guess;
    hi = 2.0 * guess;
    while (d(hi) > 0.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e8) throw OverflowRegionError("delta bracket search left the representable region");
    }
  } else {
    hi = guess;
    lo = 0.5 * guess;
    while (lo > 1e-12 && d(lo) <= 0.0) {
      hi = lo;
      lo *= 0.5;
    }
    if (lo <= 1e-12) lo = 0.0;
  }
  std::uintmax_t max_iter = 200;
  auto tol = [](double a, double b) { return std::fabs(b - a) <= 1e-10; };
  const auto [a, b] = boost::math::tools::toms748_solve(d, lo, hi, tol, max_iter);
  return {0.5 * (a + b), false, evals + static_cast<int>(max_iter)};
}

// Sum of the delta-only Gaussian log-likelihood over the two tails at (mu, sigma),
// each tail at its own profile-maximizing delta.
struct ProfilePoint {
  double loglik = -std::numeric_limits<double>::infinity();
  double delta_left = 0.0;
  double delta_right = 0.0;
};

inline ProfilePoint gaussian_profile(std::span<const double> y, double mu, double sigma, TailKind kind,
                                     ProfilePoint hint = {}) {
  ProfilePoint p;
  const auto n = static_cast<double>(y.size());
  std::vector<double> z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) z[i] = (y[i] - mu) / sigma;
  if (kind == TailKind::kSymmetric) {
    const double d = delta_mle_root(z, hint.delta_left).delta;
    p.delta_left = p.delta_right = d;
    p.loglik = loglik_delta(d, z) - n * std::log(sigma);
    return p;
  }
  std::vector<double> left, right;
  for (double v : z) (v <= 0.0 ? left : right).push_back(v);
  p.delta_left = delta_mle_root(left, hint.delta_left).delta;
  p.delta_right = delta_mle_root(right, hint.delta_right).delta;
  p.loglik = loglik_delta(p.delta_left, left) + loglik_delta(p.delta_right, right) - n * std::log(sigma);
  return p;
}

// Starting tau: sample median, Taylor-rule delta, and sd over the variance factor.
// For a Taylor delta >= 1/2 the variance factor is infinite; the scale then comes
// from matching the interquartile range of Tukey's h instead.
inline TailParams start_tau(std::span<const double> y) {
  const double kurt = sample_kurtosis(y);
  const double delta0 = taylor_delta(kurt);
  const double mu0 = sample_median(y);
  double sigma0 = 0.0;
  if (const auto vf = variance_factor(delta0)) {
    sigma0 = sample_sd(y) / *vf;
  } else {
    constexpr double kQ75 = 0.67448975019608174;
    const double iqr = sample_quantile(y, 0.75) - sample_quantile(y, 0.25);
    sigma0 = iqr / (2.0 * h_delta(kQ75, delta0));
  }
  if (!(sigma0 > 0.0)) sigma0 = sample_sd(y);
  return TailParams{mu0, sigma0, Tail::symmetric(delta0)};
}

inline std::vector<double> standardize(std::span<const double> y, double mu, double sigma) {
  std::vector<double> z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) z[i] = (y[i] - mu) / sigma;
  return z;
}

}  // namespace detail

/// MLE of delta for standardized data with mu_x = 0, sigma_x = 1 known.
///
/// Returns delta = 0 (tagged kDeltaLower) when sum z^4 / sum z^2 <= 3; otherwise
/// the unique positive root of grad_delta. The sign pattern of the gradient around
/// the root is checked and reported through `converged`.
inline FitResult mle_delta_only(std::span<const double> z) {
  if (z.empty()) throw InsufficientDataError("mle_delta_only: empty sample");
  for (double v : z) {
    if (!std::isfinite(v)) throw DomainError("mle_delta_only: non-finite data");
  }
  const auto root = detail::delta_mle_root(z);
  FitResult fit;
  fit.method = "delta_mle";
  fit.tau = TailParams{0.0, 1.0, Tail::symmetric(root.delta)};
  fit.input = InputSpec(Gaussian{0.0, 1.0});
  fit.iterations = root.evaluations;
  fit.loglik = loglik(fit.dist(), z);
  ParamEstimate est{"delta", root.delta};
  if (root.boundary) {
    fit.boundary_hit = BoundaryHit::kDeltaLower;
    fit.converged = true;
  } else {
    const double d = root.delta;
    bool unique = true;
    for (int k = 0; k < 8; ++k) unique = unique && grad_delta(d * k / 8.0, z) > 0.0;
    unique = unique && grad_delta(d + std::max(1e-6, 1e-3 * d), z) < 0.0;
    fit.converged = unique;
    const double h = 1e-4 * std::max(d, 1e-2);
    const double curvature = (grad_delta(d + h, z) - grad_delta(std::max(0.0, d - h), z)) / (d + h - std::max(0.0, d - h));
    if (curvature < 0.0) est.std_error = 1.0 / std::sqrt(-curvature);
  }
  fit.estimates.push_back(est);
  return fit;
}

struct MleOptions {
  optim::NelderMeadOptions simplex{};
};

namespace detail {

inline double to_unconstrained(double v, Constraint c) {
  switch (c) {
    case Constraint::kPositive:
      return std::log(v);
    case Constraint::kAboveTwo:
      return std::log(v - 2.0);
    case Constraint::kFree:
      break;
  }
  return v;
}

inline double from_unconstrained(double t, Constraint c) {
  switch (c) {
    case Constraint::kPositive:
      return std::exp(t);
    case Constraint::kAboveTwo:
      return 2.0 + std::exp(t);
    case Constraint::kFree:
      break;
  }
  return t;
}

inline std::vector<double> delta_names_values(const Tail& t, std::vector<std::string>* names) {
  if (t.is_double()) {
    if (names) *names = {"delta_l", "delta_r"};
    return {t.left(), t.right()};
  }
  if (names) *names = {"delta"};
  return {t.delta()};
}

inline Tail make_tail(TailKind kind, std::span<const double> deltas) {
  return kind == TailKind::kDoubleTail ? Tail::double_tail(deltas[0], deltas[1]) : Tail::symmetric(deltas[0]);
}

// Standard errors from the inverse numeric Hessian of -loglik in natural
// parameters. Parameters sitting on the delta = 0 boundary are held fixed.
inline void attach_std_errors(FitResult& fit, std::span<const double> y, TailKind kind) {
  const auto info = fit.input.param_info();
  std::vector<std::string> delta_names;
  const auto deltas = delta_names_values(fit.tau.tail, &delta_names);
  std::vector<double> natural = fit.input.natural_params();
  const std::size_t n_input = natural.size();
  natural.insert(natural.end(), deltas.begin(), deltas.end());

  std::vector<std::size_t> active;
  std::vector<double> steps;
  for (std::size_t i = 0; i < natural.size(); ++i) {
    double h = std::max(1e-4, 1e-4 * std::fabs(natural[i]));
    if (i >= n_input) {
      if (natural[i] <= 0.0) continue;
      h = std::min(h, 0.5 * natural[i]);
    } else if (info[i].constraint == Constraint::kPositive) {
      h = std::min(h, 0.5 * natural[i]);
    } else if (info[i].constraint == Constraint::kAboveTwo) {
      h = std::min(h, 0.5 * (natural[i] - 2.0));
    }
    active.push_back(i);
    steps.push_back(h);
  }

  fit.estimates.clear();
  for (std::size_t i = 0; i < n_input; ++i) fit.estimates.push_back({info[i].name, natural[i]});
  for (std::size_t k = 0; k < deltas.size(); ++k) fit.estimates.push_back({delta_names[k], deltas[k]});
  if (active.empty()) return;

  auto negll = [&](const std::vector<double>& sub) {
    std::vector<double> full = natural;
    for (std::size_t k = 0; k < active.size(); ++k) full[active[k]] = sub[k];
    try {
      const InputSpec in = fit.input.with_natural_params({full.begin(), full.begin() + static_cast<std::ptrdiff_t>(n_input)});
      const Tail t = make_tail(kind, std::span<const double>(full).subspan(n_input));
      const LogLik ll = loglik(LambertWDist(in, t), y);
      return ll.finite() ? -ll.total : std::numeric_limits<double>::quiet_NaN();
    } catch (const std::exception&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  std::vector<double> x0;
  for (std::size_t i : active) x0.push_back(natural[i]);
  const Eigen::MatrixXd hess = optim::numeric_hessian(negll, x0, steps);
  if (!hess.allFinite()) return;
  const Eigen::MatrixXd cov = optim::symmetric_pseudo_inverse(hess);
  for (std::size_t k = 0; k < active.size(); ++k) {
    const double var = cov(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    if (var > 0.0) fit.estimates[active[k]].std_error = std::sqrt(var);
  }
}

inline FitResult finish_mle(std::string method, std::span<const double> y, const InputSpec& input, const Tail& tail,
                            TailKind kind, int evals, bool converged) {
  FitResult fit;
  fit.method = std::move(method);
  fit.input = input;
  const auto [mu, sigma] = input.location_scale();
  fit.tau = TailParams{mu, sigma, tail};
  fit.loglik = loglik(fit.dist(), y);
  fit.iterations = evals;
  fit.converged = converged && fit.loglik.finite();
  if (tail.left() == 0.0 || tail.right() == 0.0) fit.boundary_hit = BoundaryHit::kDeltaLower;
  attach_std_errors(fit, y, kind);
  return fit;
}

// Gaussian input: delta (or each tail's delta) is profiled out exactly with the
// delta-only root, leaving a simplex search over (mu_x, log sigma_x).
inline FitResult mle_gaussian(std::span<const double> y, TailKind kind, const MleOptions& opt) {
  const TailParams start = start_tau(y);
  ProfilePoint hint{};
  hint.delta_left = hint.delta_right = start.tail.delta();
  auto objective = [&](const std::vector<double>& p) {
    try {
      const ProfilePoint pp = gaussian_profile(y, p[0], std::exp(p[1]), kind, hint);
      if (std::isfinite(pp.loglik)) hint = pp;
      return -pp.loglik;
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const std::vector<double> x0{start.mu_x, std::log(start.sigma_x)};
  const std::vector<double> steps{0.1 * start.sigma_x, 0.1};
  auto res = optim::nelder_mead(objective, x0, steps, opt.simplex);

  // Boundary candidate delta = 0 with the closed-form Gaussian MLE.
  const double mean = sample_mean(y);
  const double sd_ml = sample_sd(y) * std::sqrt((y.size() - 1.0) / static_cast<double>(y.size()));
  const double f_gauss = objective({mean, std::log(sd_ml)});
  if (f_gauss < res.f) {
    res.x = {mean, std::log(sd_ml)};
    res.f = f_gauss;
  }
  if (!std::isfinite(res.f)) throw ConvergenceError("no parameter value with a finite log-likelihood was found");
  const ProfilePoint best = gaussian_profile(y, res.x[0], std::exp(res.x[1]), kind, hint);
  const double deltas[2] = {best.delta_left, best.delta_right};
  const Tail tail = make_tail(kind, deltas);
  return finish_mle("lambertw_mle", y, InputSpec(Gaussian{res.x[0], std::exp(res.x[1])}), tail, kind,
                    res.evaluations, res.converged);
}

// Any other input family: simplex over unconstrained (beta, log delta...).
inline FitResult mle_generic(std::span<const double> y, const InputSpec& family, TailKind kind,
                             const MleOptions& opt) {
  const auto info = family.param_info();
  const std::size_t n_input = info.size();
  const std::size_t n_delta = kind == TailKind::kDoubleTail ? 2 : 1;

  // Starting values: moment-matched input parameters, small delta.
  std::vector<double> beta0;
  double delta0 = 0.05;
  const SampleMoments m = sample_moments(y);
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, StudentT>) {
          const TailParams s = start_tau(y);
          beta0 = {s.mu_x, s.sigma_x, 10.0};
          delta0 = std::max(0.5 * s.tail.delta(), 0.01);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          beta0 = {0.5 * (m.min + m.max), 1.02 * (m.max - m.min) / std::sqrt(12.0)};
          delta0 = 0.01;
        } else if constexpr (std::is_same_v<T, Gamma>) {
          beta0 = {m.mean * m.mean / (m.sd * m.sd), m.mean / (m.sd * m.sd)};
        } else if constexpr (std::is_same_v<T, ChiSquared>) {
          beta0 = {std::max(m.mean, 0.1)};
        } else if constexpr (std::is_same_v<T, Exponential>) {
          beta0 = {1.0 / m.mean};
        } else {
          beta0 = {m.mean, m.sd};
        }
      },
      family.family());

  auto unpack = [&](const std::vector<double>& p, std::vector<double>& beta, std::vector<double>& deltas) {
    beta.resize(n_input);
    for (std::size_t i = 0; i < n_input; ++i) beta[i] = detail::from_unconstrained(p[i], info[i].constraint);
    deltas.resize(n_delta);
    for (std::size_t k = 0; k < n_delta; ++k) deltas[k] = std::exp(p[n_input + k]);
  };
  std::vector<double> fixed_deltas;  // when non-empty, deltas are held at these values
  auto negll = [&](const std::vector<double>& p) {
    try {
      std::vector<double> beta, deltas;
      std::vector<double> full = p;
      if (!fixed_deltas.empty()) {
        for (double d : fixed_deltas) full.push_back(d > 0.0 ? std::log(d) : -std::numeric_limits<double>::infinity());
      }
      unpack(full, beta, deltas);
      const LogLik ll = loglik(LambertWDist(family.with_natural_params(beta), make_tail(kind, deltas)), y);
      return ll.finite() ? -ll.total : std::numeric_limits<double>::infinity();
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  std::vector<double> x0, steps;
  for (std::size_t i = 0; i < n_input; ++i) {
    x0.push_back(detail::to_unconstrained(beta0[i], info[i].constraint));
    steps.push_back(info[i].constraint == Constraint::kFree ? 0.1 * m.sd : 0.1);
  }
  for (std::size_t k = 0; k < n_delta; ++k) {
    x0.push_back(std::log(delta0));
    steps.push_back(0.5);
  }
  auto res = optim::nelder_mead(negll, x0, steps, opt.simplex);
  if (!std::isfinite(res.f)) throw ConvergenceError("no parameter value with a finite log-likelihood was found");
  int evals = res.evaluations;

  std::vector<double> beta, deltas;
  unpack(res.x, beta, deltas);
  // Tails driven towards zero: refit with those deltas pinned at exactly 0.
  bool pinned = false;
  std::vector<double> pinned_deltas = deltas;
  for (double& d : pinned_deltas) {
    if (d < 1e-6) {
      d = 0.0;
      pinned = true;
    }
  }
  if (pinned) {
    fixed_deltas = pinned_deltas;
    // Keep deltas that stay free as fixed at their current estimate; the input
    // parameters are refitted.
    std::vector<double> sub(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(n_input));
    std::vector<double> sub_steps(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(n_input));
    auto res0 = optim::nelder_mead(negll, sub, sub_steps, opt.simplex);
    evals += res0.evaluations;
    if (res0.f <= res.f) {
      std::vector<double> full = res0.x;
      for (double d : pinned_deltas) full.push_back(d > 0.0 ? std::log(d) : -std::numeric_limits<double>::infinity());
      unpack(full, beta, deltas);
      res.f = res0.f;
    }
  }
  return finish_mle("lambertw_mle", y, family.with_natural_params(beta), make_tail(kind, deltas), kind, evals,
                    res.converged);
}

}  // namespace detail

/// Joint maximum likelihood over input parameters and tail parameter(s).
inline FitResult mle_joint(std::span<const double> y, const InputSpec& family = InputSpec(Gaussian{}),
                           TailKind kind = TailKind::kSymmetric, const MleOptions& opt = {}) {
  detail::require_fit_data(y);
  if (std::holds_alternative<Gaussian>(family.family())) return detail::mle_gaussian(y, kind, opt);
  return detail::mle_generic(y, family, kind, opt);
}

struct DeltaGmmResult {
  double delta = 0.0;
  BoundaryHit boundary_hit = BoundaryHit::kNone;
};

namespace detail {

inline double back_transformed_kurtosis(std::span<const double> z, double delta, std::vector<double>& buf) {
  buf.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) buf[i] = w_delta(z[i], delta);
  return sample_kurtosis(buf);
}

}  // namespace detail

/// Delta in [lower, upper] whose back-transformed data W_delta(z) has sample
/// kurtosis `target_kurtosis`.
///
/// The kurtosis of W_delta(z) decreases in delta, so the minimizer of the
/// absolute mismatch is delta = 0 when kurt(z) <= target, the upper bound when
/// even that leaves excess kurtosis, and otherwise the bracketed root.
inline DeltaGmmResult delta_gmm(std::span<const double> z, double target_kurtosis = 3.0, double lower = 0.0,
                                double upper = 10.0) {
  if (z.size() < 4) throw InsufficientDataError("delta_gmm: need at least 4 values");
  std::vector<double> buf;
  auto mismatch = [&](double d) { return detail::back_transformed_kurtosis(z, d, buf) - target_kurtosis; };
  const double f_lo = mismatch(lower);
  if (f_lo <= 0.0) return {lower, lower == 0.0 ? BoundaryHit::kDeltaLower : BoundaryHit::kNone};
  const double f_hi = mismatch(upper);
  if (f_hi >= 0.0) return {upper, BoundaryHit::kDeltaUpper};
  std::uintmax_t max_iter = 200;
  auto tol = [](double a, double b) { return std::fabs(b - a) <= 1e-13 * std::max(1.0, std::fabs(a)); };
  const auto [a, b] = boost::math::tools::toms748_solve(mismatch, lower, upper, f_lo, f_hi, tol, max_iter);
  const double fa = std::fabs(mismatch(a));
  const double fb = std::fabs(mismatch(b));
  return {fa <= fb ? a : b, BoundaryHit::kNone};
}

namespace detail {

// Two-tail kurtosis matching. With two free tails the kurtosis condition alone
// leaves a curve of solutions; the skewness of the back-transformed data is
// matched to zero as the second condition.
inline std::pair<double, double> delta2_gmm(std::span<const double> z, double target_kurtosis, double lower,
                                            double upper, std::pair<double, double> start) {
  std::vector<double> buf(z.size());
  auto clamp = [&](double d) { return std::clamp(d, lower, upper); };
  auto objective = [&](const std::vector<double>& p) {
    const double dl = clamp(p[0]), dr = clamp(p[1]);
    const Tail t = Tail::double_tail(dl, dr);
    const TailParams tau{0.0, 1.0, t};
    for (std::size_t i = 0; i < z.size(); ++i) buf[i] = w_tau(z[i], tau);
    const auto c = central_moments(buf);
    const double kurt = c.m4 / (c.m2 * c.m2);
    const double skew = c.m3 / std::pow(c.m2, 1.5);
    const double out = (kurt - target_kurtosis) * (kurt - target_kurtosis) + skew * skew;
    const double excess = (p[0] - dl) * (p[0] - dl) + (p[1] - dr) * (p[1] - dr);
    return out + excess;
  };
  optim::NelderMeadOptions opt;
  opt.f_tol = 1e-14;
  opt.x_tol = 1e-8;
  const double s = std::max(0.05, 0.25 * std::max(start.first, start.second));
  const auto res = optim::nelder_mead(objective, {start.first, start.second}, {s, s}, opt);
  return {clamp(res.x[0]), clamp(res.x[1])};
}

inline FitResult igmm_impl(std::span<const double> y, const IGMMConfig& cfg, TailKind kind) {
  cfg.validate();
  require_fit_data(y);
  const TailParams start = start_tau(y);
  double mu = start.mu_x;
  double sigma = start.sigma_x;
  double dl = std::clamp(start.tail.delta(), cfg.delta_lower, cfg.delta_upper);
  double dr = dl;
  std::vector<double> prev{0.0, 0.0, 0.0};
  if (kind == TailKind::kDoubleTail) prev.push_back(0.0);
  auto current = [&] {
    std::vector<double> v{mu, sigma, dl};
    if (kind == TailKind::kDoubleTail) v.push_back(dr);
    return v;
  };
  auto distance = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  };

  int k = 0;
  BoundaryHit hit = BoundaryHit::kNone;
  std::vector<double> x(y.size());
  while (distance(current(), prev) > cfg.tol && k < cfg.max_iterations) {
    const std::vector<double> z = standardize(y, mu, sigma);
    if (kind == TailKind::kSymmetric) {
      const auto g = delta_gmm(z, cfg.target_kurtosis, cfg.delta_lower, cfg.delta_upper);
      dl = dr = g.delta;
      hit = g.boundary_hit;
    } else {
      std::tie(dl, dr) = delta2_gmm(z, cfg.target_kurtosis, cfg.delta_lower, cfg.delta_upper, {dl, dr});
      hit = (dl == cfg.delta_upper || dr == cfg.delta_upper)   ? BoundaryHit::kDeltaUpper
            : (dl == cfg.delta_lower || dr == cfg.delta_lower) ? BoundaryHit::kDeltaLower
                                                               : BoundaryHit::kNone;
    }
    const TailParams tau{0.0, 1.0, kind == TailKind::kDoubleTail ? Tail::double_tail(dl, dr) : Tail::symmetric(dl)};
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = w_tau(z[i], tau) * sigma + mu;
    prev = current();
    mu = sample_mean(x);
    sigma = sample_sd(x);
    ++k;
  }

  FitResult fit;
  fit.method = kind == TailKind::kDoubleTail ? "igmm_hh" : "igmm";
  fit.tau = TailParams{mu, sigma, kind == TailKind::kDoubleTail ? Tail::double_tail(dl, dr) : Tail::symmetric(dl)};
  fit.input = InputSpec(Gaussian{mu, sigma});
  fit.iterations = k;
  fit.converged = distance(current(), prev) <= cfg.tol;
  fit.boundary_hit = hit;
  fit.loglik = loglik(fit.dist(), y);
  fit.estimates = {{"mu_x", mu}, {"sigma_x", sigma}};
  if (kind == TailKind::kDoubleTail) {
    fit.estimates.push_back({"delta_l", dl});
    fit.estimates.push_back({"delta_r", dr});
  } else {
    fit.estimates.push_back({"delta", dl});
  }
  return fit;
}

}  // namespace detail

/// Iterative generalized method of moments for tau = (mu_x, sigma_x, delta).
inline FitResult igmm(std::span<const double> y, const IGMMConfig& cfg = {}) {
  return detail::igmm_impl(y, cfg, TailKind::kSymmetric);
}

/// IGMM with separate left and right tail parameters.
inline FitResult igmm_double_tail(std::span<const double> y, const IGMMConfig& cfg = {}) {
  return detail::igmm_impl(y, cfg, TailKind::kDoubleTail);
}

struct LikelihoodRatio {
  double statistic = 0.0;
  double p_value = 1.0;
  FitResult symmetric;
  FitResult double_tail;
};

/// Likelihood-ratio test of a symmetric tail (h) against separate tails (hh),
/// Gaussian input, one degree of freedom.
inline LikelihoodRatio lr_test_double_tail(std::span<const double> y, const MleOptions& opt = {}) {
  LikelihoodRatio lr{0.0, 1.0, mle_joint(y, InputSpec(Gaussian{}), TailKind::kSymmetric, opt),
                     mle_joint(y, InputSpec(Gaussian{}), TailKind::kDoubleTail, opt)};
  lr.statistic = std::max(0.0, 2.0 * (lr.double_tail.loglik.total - lr.symmetric.loglik.total));
  lr.p_value = std::erfc(std::sqrt(0.5 * lr.statistic));
  return lr;
}

}  // namespace heavytail
