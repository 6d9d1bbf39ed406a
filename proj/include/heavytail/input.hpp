#pragma once

// Latent input distributions F_X for Lambert W x F_X models.

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/exponential.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/distributions/uniform.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "heavytail/error.hpp"

namespace heavytail {

// How the transform standardizes the input before applying the tail.
enum class InputClass {
  kLocationScale,       // tau = (mu_x, sigma_x, delta)
  kScale,               // tau = (0, sigma_x, delta), support [0, inf)
  kNoncentralNonscale,  // tau = (0, 1, delta)
};

struct Gaussian {
  double mu = 0.0;
  double sigma = 1.0;
};
struct Uniform {
  double a = 0.0;
  double b = 1.0;
};
struct Gamma {
  double shape = 1.0;
  double rate = 1.0;
};
struct ChiSquared {
  double k = 1.0;
};
struct Exponential {
  double rate = 1.0;
};
// X = location + scale * T with T ~ t_nu.
struct StudentT {
  double nu = 5.0;
  double location = 0.0;
  double scale = 1.0;
};

using Family = std::variant<Gaussian, Uniform, Gamma, ChiSquared, Exponential, StudentT>;

// Constraint on one natural parameter; drives the unconstrained reparametrization.
enum class Constraint { kFree, kPositive, kAboveTwo };

struct ParamInfo {
  std::string name;
  Constraint constraint;
};

class InputSpec {
 public:
  InputSpec() : InputSpec(Gaussian{}) {}
  InputSpec(Family family) : family_(family) { validate(); }  // NOLINT(google-explicit-constructor)
  InputSpec(Family family, InputClass override_class) : family_(family), class_override_(override_class) {
    validate();
  }

  const Family& family() const { return family_; }

  std::string name() const {
    return std::visit(
        [](const auto& f) -> std::string {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Gaussian>) return "gaussian";
          if constexpr (std::is_same_v<T, Uniform>) return "uniform";
          if constexpr (std::is_same_v<T, Gamma>) return "gamma";
          if constexpr (std::is_same_v<T, ChiSquared>) return "chisq";
          if constexpr (std::is_same_v<T, Exponential>) return "exp";
          if constexpr (std::is_same_v<T, StudentT>) return "t";
        },
        family_);
  }

  InputClass input_class() const {
    if (class_override_) return *class_override_;
    return std::visit(
        [](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Gamma> || std::is_same_v<T, ChiSquared> ||
                        std::is_same_v<T, Exponential>) {
            return InputClass::kScale;
          } else {
            return InputClass::kLocationScale;
          }
        },
        family_);
  }

  double mean() const {
    return std::visit(
        [](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Gaussian>) return f.mu;
          if constexpr (std::is_same_v<T, Uniform>) return 0.5 * (f.a + f.b);
          if constexpr (std::is_same_v<T, Gamma>) return f.shape / f.rate;
          if constexpr (std::is_same_v<T, ChiSquared>) return f.k;
          if constexpr (std::is_same_v<T, Exponential>) return 1.0 / f.rate;
          if constexpr (std::is_same_v<T, StudentT>) return f.location;
        },
        family_);
  }

  double sd() const {
    return std::visit(
        [](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Gaussian>) return f.sigma;
          if constexpr (std::is_same_v<T, Uniform>) return (f.b - f.a) / std::sqrt(12.0);
          if constexpr (std::is_same_v<T, Gamma>) return std::sqrt(f.shape) / f.rate;
          if constexpr (std::is_same_v<T, ChiSquared>) return std::sqrt(2.0 * f.k);
          if constexpr (std::is_same_v<T, Exponential>) return 1.0 / f.rate;
          if constexpr (std::is_same_v<T, StudentT>) return f.scale * std::sqrt(f.nu / (f.nu - 2.0));
        },
        family_);
  }

  // Theoretical (non-excess) kurtosis; nullopt where it does not exist.
  std::optional<double> kurtosis() const {
    return std::visit(
        [](const auto& f) -> std::optional<double> {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Gaussian>) return 3.0;
          if constexpr (std::is_same_v<T, Uniform>) return 1.8;
          if constexpr (std::is_same_v<T, Gamma>) return 3.0 + 6.0 / f.shape;
          if constexpr (std::is_same_v<T, ChiSquared>) return 3.0 + 12.0 / f.k;
          if constexpr (std::is_same_v<T, Exponential>) return 9.0;
          if constexpr (std::is_same_v<T, StudentT>) {
            if (f.nu <= 4.0) return std::nullopt;
            return 3.0 * (f.nu - 2.0) / (f.nu - 4.0);
          }
        },
        family_);
  }

  // Standardization applied by the transform: (mu, sigma) of tau.
  std::pair<double, double> location_scale() const {
    switch (input_class()) {
      case InputClass::kLocationScale:
        return {mean(), sd()};
      case InputClass::kScale:
        return {0.0, sd()};
      case InputClass::kNoncentralNonscale:
        break;
    }
    return {0.0, 1.0};
  }

  double pdf(double x) const { return std::exp(log_pdf(x)); }

  double log_pdf(double x) const {
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    return std::visit(
        [x](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Gaussian>) {
            const double u = (x - f.mu) / f.sigma;
            return -0.5 * u * u - std::log(f.sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
          }
          if constexpr (std::is_same_v<T, Uniform>) {
            if (x < f.a || x > f.b) return kNegInf;
            return -std::log(f.b - f.a);
          }
          if constexpr (std::is_same_v<T, Gamma>) {
            return gamma_log_pdf(x, f.shape, f.rate);
          }
          if constexpr (std::is_same_v<T, ChiSquared>) {
            return gamma_log_pdf(x, 0.5 * f.k, 0.5);
          }
          if constexpr (std::is_same_v<T, Exponential>) {
            if (x < 0.0) return kNegInf;
            return std::log(f.rate) - f.rate * x;
          }
          if constexpr (std::is_same_v<T, StudentT>) {
            const double t = (x - f.location) / f.scale;
            const double nu = f.nu;
            return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                   0.5 * std::log(nu * std::numbers::pi) - std::log(f.scale) -
                   0.5 * (nu + 1.0) * std::log1p(t * t / nu);
          }
        },
        family_);
  }

  double cdf(double x) const {
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    if (x == std::numeric_limits<double>::infinity()) return 1.0;
    if (x == -std::numeric_limits<double>::infinity()) return 0.0;
    return std::visit(
        [x](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          namespace bm = boost::math;
          if constexpr (std::is_same_v<T, Gaussian>) {
            return bm::cdf(bm::normal_distribution<double>(f.mu, f.sigma), x);
          }
          if constexpr (std::is_same_v<T, Uniform>) {
            if (x <= f.a) return 0.0;
            if (x >= f.b) return 1.0;
            return (x - f.a) / (f.b - f.a);
          }
          if constexpr (std::is_same_v<T, Gamma>) {
            if (x <= 0.0) return 0.0;
            return bm::cdf(bm::gamma_distribution<double>(f.shape, 1.0 / f.rate), x);
          }
          if constexpr (std::is_same_v<T, ChiSquared>) {
            if (x <= 0.0) return 0.0;
            return bm::cdf(bm::chi_squared_distribution<double>(f.k), x);
          }
          if constexpr (std::is_same_v<T, Exponential>) {
            if (x <= 0.0) return 0.0;
            return -std::expm1(-f.rate * x);
          }
          if constexpr (std::is_same_v<T, StudentT>) {
            return bm::cdf(bm::students_t_distribution<double>(f.nu), (x - f.location) / f.scale);
          }
        },
        family_);
  }

  double quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
    return std::visit(
        [p](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          namespace bm = boost::math;
          if constexpr (std::is_same_v<T, Gaussian>) {
            return bm::quantile(bm::normal_distribution<double>(f.mu, f.sigma), p);
          }
          if constexpr (std::is_same_v<T, Uniform>) return f.a + p * (f.b - f.a);
          if constexpr (std::is_same_v<T, Gamma>) {
            return bm::quantile(bm::gamma_distribution<double>(f.shape, 1.0 / f.rate), p);
          }
          if constexpr (std::is_same_v<T, ChiSquared>) {
            return bm::quantile(bm::chi_squared_distribution<double>(f.k), p);
          }
          if constexpr (std::is_same_v<T, Exponential>) return -std::log1p(-p) / f.rate;
          if constexpr (std::is_same_v<T, StudentT>) {
            return f.location + f.scale * bm::quantile(bm::students_t_distribution<double>(f.nu), p);
          }
        },
        family_);
  }

  // Natural parameters used by likelihood fitting, in a fixed order.
  std::vector<ParamInfo> param_info() const {
    return std::visit(
        [](const auto& f) -> std::vector<ParamInfo> {
          using T = std::decay_t<decltype(f)>;
          using C = Constraint;
          if constexpr (std::is_same_v<T, Gaussian> || std::is_same_v<T, Uniform>) {
            return {{"mu_x", C::kFree}, {"sigma_x", C::kPositive}};
          }
          if constexpr (std::is_same_v<T, Gamma>) return {{"shape", C::kPositive}, {"rate", C::kPositive}};
          if constexpr (std::is_same_v<T, ChiSquared>) return {{"k", C::kPositive}};
          if constexpr (std::is_same_v<T, Exponential>) return {{"rate", C::kPositive}};
          if constexpr (std::is_same_v<T, StudentT>) {
            return {{"mu_x", C::kFree}, {"sigma_x", C::kPositive}, {"nu", C::kAboveTwo}};
          }
        },
        family_);
  }

  std::vector<double> natural_params() const {
    return std::visit(
        [this](const auto& f) -> std::vector<double> {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Gaussian>) return {f.mu, f.sigma};
          if constexpr (std::is_same_v<T, Uniform>) return {mean(), sd()};
          if constexpr (std::is_same_v<T, Gamma>) return {f.shape, f.rate};
          if constexpr (std::is_same_v<T, ChiSquared>) return {f.k};
          if constexpr (std::is_same_v<T, Exponential>) return {f.rate};
          if constexpr (std::is_same_v<T, StudentT>) return {f.location, sd(), f.nu};
        },
        family_);
  }

  // Same family with new natural parameters (ordered as in param_info()).
  InputSpec with_natural_params(const std::vector<double>& p) const {
    Family next = std::visit(
        [&p](const auto& f) -> Family {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Gaussian>) return Gaussian{p.at(0), p.at(1)};
          if constexpr (std::is_same_v<T, Uniform>) {
            const double half = std::sqrt(3.0) * p.at(1);
            return Uniform{p.at(0) - half, p.at(0) + half};
          }
          if constexpr (std::is_same_v<T, Gamma>) return Gamma{p.at(0), p.at(1)};
          if constexpr (std::is_same_v<T, ChiSquared>) return ChiSquared{p.at(0)};
          if constexpr (std::is_same_v<T, Exponential>) return Exponential{p.at(0)};
          if constexpr (std::is_same_v<T, StudentT>) {
            const double nu = p.at(2);
            return StudentT{nu, p.at(0), p.at(1) * std::sqrt((nu - 2.0) / nu)};
          }
        },
        family_);
    return class_override_ ? InputSpec(next, *class_override_) : InputSpec(next);
  }

 private:
  static double gamma_log_pdf(double x, double shape, double rate) {
    if (x < 0.0) return -std::numeric_limits<double>::infinity();
    if (x == 0.0) {
      if (shape < 1.0) return std::numeric_limits<double>::infinity();
      if (shape > 1.0) return -std::numeric_limits<double>::infinity();
      return std::log(rate);
    }
    return (shape - 1.0) * std::log(x) - rate * x + shape * std::log(rate) - std::lgamma(shape);
  }

  void validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    const bool ok = std::visit(
        [&](const auto& f) -> bool {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Gaussian>) return std::isfinite(f.mu) && positive(f.sigma);
          if constexpr (std::is_same_v<T, Uniform>) return std::isfinite(f.a) && std::isfinite(f.b) && f.a < f.b;
          if constexpr (std::is_same_v<T, Gamma>) return positive(f.shape) && positive(f.rate);
          if constexpr (std::is_same_v<T, ChiSquared>) return positive(f.k);
          if constexpr (std::is_same_v<T, Exponential>) return positive(f.rate);
          if constexpr (std::is_same_v<T, StudentT>) {
            return f.nu > 2.0 && std::isfinite(f.nu) && std::isfinite(f.location) && positive(f.scale);
          }
        },
        family_);
    if (!ok) throw DomainError("invalid parameters for input family '" + name() + "'");
  }

  Family family_;
  std::optional<InputClass> class_override_;
};

}  // namespace heavytail
