#pragma once

// Random samples from Lambert W x F_X, the Monte-Carlo replication study and the
// Cauchy running-mean demonstration.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "heavytail/distribution.hpp"
#include "heavytail/error.hpp"
#include "heavytail/estimate.hpp"
#include "heavytail/random.hpp"
#include "heavytail/sample_stats.hpp"
#include "json.hpp"

namespace heavytail {

inline double sample_input(const InputSpec& input, Rng& rng) {
  if (const auto* g = std::get_if<Gaussian>(&input.family())) return g->mu + g->sigma * rng.normal();
  return input.quantile(rng.uniform());
}

inline std::vector<double> sample_input(const InputSpec& input, std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  for (auto& v : x) v = sample_input(input, rng);
  return x;
}

inline std::vector<double> rlambertw(std::size_t n, const LambertWDist& dist, Rng& rng) {
  if (n < 1) throw DomainError("rlambertw: n must be >= 1");
  std::vector<double> y = sample_input(dist.input(), n, rng);
  const TailParams tau = dist.tau();
  if (tau.tail.is_zero()) return y;
  for (auto& v : y) v = h_tau(v, tau);
  return y;
}

inline std::vector<double> rlambertw(std::size_t n, const LambertWDist& dist, std::uint64_t seed) {
  Rng rng(seed);
  return rlambertw(n, dist, rng);
}

// ---------------------------------------------------------------------------
// Replication study

enum class Estimator { kMedian, kGaussianMle, kIgmm, kLambertWMle, kDeltaMle };

inline std::string estimator_name(Estimator e) {
  switch (e) {
    case Estimator::kMedian:
      return "median";
    case Estimator::kGaussianMle:
      return "gaussian_mle";
    case Estimator::kIgmm:
      return "igmm";
    case Estimator::kLambertWMle:
      return "lambertw_mle";
    case Estimator::kDeltaMle:
      return "delta_mle";
  }
  return "?";
}

inline Estimator parse_estimator(const std::string& s) {
  for (auto e : {Estimator::kMedian, Estimator::kGaussianMle, Estimator::kIgmm, Estimator::kLambertWMle,
                 Estimator::kDeltaMle}) {
    if (estimator_name(e) == s) return e;
  }
  throw DomainError("unknown estimator '" + s + "'");
}

struct StudyPlan {
  std::vector<std::size_t> sample_sizes{50, 100, 1000};
  std::vector<double> delta_values{0.0, 0.1, 1.0 / 3.0, 0.5, 1.0, 2.0, 5.0};
  int replications = 200;
  std::vector<Estimator> estimators{Estimator::kMedian, Estimator::kGaussianMle, Estimator::kIgmm,
                                    Estimator::kLambertWMle};
  std::uint64_t seed = 20240601;

  void validate() const {
    if (replications < 1) throw DomainError("plan: replications must be >= 1");
    if (sample_sizes.empty() || delta_values.empty() || estimators.empty()) {
      throw DomainError("plan: sample_sizes, delta_values and estimators must be non-empty");
    }
    for (auto n : sample_sizes) {
      if (n < kMinFitSize) throw DomainError("plan: sample sizes must be >= " + std::to_string(kMinFitSize));
    }
    for (double d : delta_values) {
      if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("plan: delta values must be finite and >= 0");
    }
    std::set<Estimator> seen(estimators.begin(), estimators.end());
    if (seen.size() != estimators.size()) throw DomainError("plan: duplicate estimator");
  }
};

struct ReplicationRow {
  std::size_t n = 0;
  double delta = 0.0;
  std::string estimator;
  std::string parameter;
  double mean = 0.0;
  double bias = 0.0;
  double prop_below = 0.0;
  double sd_sqrtN = 0.0;
  double rmse_sqrtN = 0.0;
  double na_ratio = 0.0;
};

struct ReplicationTable {
  std::vector<ReplicationRow> rows;

  const ReplicationRow* find(std::size_t n, double delta, const std::string& estimator,
                             const std::string& parameter) const {
    for (const auto& r : rows) {
      if (r.n == n && r.delta == delta && r.estimator == estimator && r.parameter == parameter) return &r;
    }
    return nullptr;
  }
};

inline int thread_count_from_env() {
  if (const char* env = std::getenv("HEAVYTAIL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 1024));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs f(i) for i in [0, count) on up to `threads` workers.
template <class F>
void parallel_for(std::size_t count, int threads, F&& f) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(workers, count); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

namespace detail {

inline std::vector<std::string> estimator_parameters(Estimator e) {
  switch (e) {
    case Estimator::kMedian:
      return {"mu_x"};
    case Estimator::kGaussianMle:
      return {"mu_y", "sigma_y"};
    case Estimator::kIgmm:
    case Estimator::kLambertWMle:
      return {"mu_x", "sigma_x", "delta", "sigma_y"};
    case Estimator::kDeltaMle:
      return {"delta"};
  }
  return {};
}

inline double implied_sigma_y(double sigma_x, double delta) {
  const auto vf = variance_factor(delta);
  return vf ? sigma_x * *vf : std::numeric_limits<double>::infinity();
}

// Truth for Gaussian input with mu_x = 0, sigma_x = 1.
inline double true_value(const std::string& parameter, double delta) {
  if (parameter == "sigma_x") return 1.0;
  if (parameter == "delta") return delta;
  if (parameter == "sigma_y") return implied_sigma_y(1.0, delta);
  return 0.0;
}

// Estimates in estimator_parameters order; nullopt marks an invalid replication.
inline std::optional<std::vector<double>> run_estimator(Estimator e, std::span<const double> y) {
  try {
    switch (e) {
      case Estimator::kMedian:
        return std::vector<double>{sample_median(y)};
      case Estimator::kGaussianMle: {
        const double sd_ml = sample_sd(y) * std::sqrt((y.size() - 1.0) / static_cast<double>(y.size()));
        return std::vector<double>{sample_mean(y), sd_ml};
      }
      case Estimator::kIgmm:
      case Estimator::kLambertWMle: {
        const FitResult fit = e == Estimator::kIgmm ? igmm(y) : mle_joint(y);
        if (!fit.loglik.finite()) return std::nullopt;
        const TailParams& t = fit.tau;
        return std::vector<double>{t.mu_x, t.sigma_x, t.tail.delta(), implied_sigma_y(t.sigma_x, t.tail.delta())};
      }
      case Estimator::kDeltaMle: {
        const FitResult fit = mle_delta_only(y);
        if (!fit.loglik.finite()) return std::nullopt;
        return std::vector<double>{fit.tau.tail.delta()};
      }
    }
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

struct ReplicationOutcome {
  std::vector<std::vector<double>> estimates;  // per estimator; empty when all attempts failed
  std::vector<int> failures;                   // per estimator
};

inline constexpr int kMaxAttempts = 10;

}  // namespace detail

/// Runs the grid study. The sample for (N, delta, replication, attempt) is drawn
/// from its own substream, so the table does not depend on `threads`.
inline ReplicationTable run_study(const StudyPlan& plan, int threads = 0) {
  plan.validate();
  if (threads <= 0) threads = thread_count_from_env();
  const std::size_t n_cells = plan.sample_sizes.size() * plan.delta_values.size();
  const auto reps = static_cast<std::size_t>(plan.replications);
  const std::size_t n_est = plan.estimators.size();
  std::vector<detail::ReplicationOutcome> outcomes(n_cells * reps);

  parallel_for(outcomes.size(), threads, [&](std::size_t task) {
    const std::size_t cell = task / reps;
    const std::size_t rep = task % reps;
    const std::size_t n = plan.sample_sizes[cell / plan.delta_values.size()];
    const double delta = plan.delta_values[cell % plan.delta_values.size()];
    const LambertWDist dist = tukey_h(0.0, 1.0, delta);
    auto draw = [&](int attempt) {
      Rng rng(substream_seed(plan.seed, {cell, rep, static_cast<std::uint64_t>(attempt)}));
      return rlambertw(n, dist, rng);
    };
    auto& out = outcomes[task];
    out.estimates.resize(n_est);
    out.failures.assign(n_est, 0);
    const std::vector<double> first = draw(0);
    for (std::size_t e = 0; e < n_est; ++e) {
      for (int attempt = 0; attempt < detail::kMaxAttempts; ++attempt) {
        const std::vector<double> y = attempt == 0 ? first : draw(attempt);
        if (auto est = detail::run_estimator(plan.estimators[e], y)) {
          out.estimates[e] = std::move(*est);
          break;
        }
        ++out.failures[e];
      }
    }
  });

  ReplicationTable table;
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    const std::size_t n = plan.sample_sizes[cell / plan.delta_values.size()];
    const double delta = plan.delta_values[cell % plan.delta_values.size()];
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    for (std::size_t e = 0; e < n_est; ++e) {
      const auto params = detail::estimator_parameters(plan.estimators[e]);
      int failures = 0, successes = 0;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const auto& out = outcomes[cell * reps + rep];
        failures += out.failures[e];
        successes += out.estimates[e].empty() ? 0 : 1;
      }
      for (std::size_t p = 0; p < params.size(); ++p) {
        const double truth = detail::true_value(params[p], delta);
        std::vector<double> v;
        for (std::size_t rep = 0; rep < reps; ++rep) {
          const auto& est = outcomes[cell * reps + rep].estimates[e];
          if (!est.empty()) v.push_back(est[p]);
        }
        ReplicationRow row;
        row.n = n;
        row.delta = delta;
        row.estimator = estimator_name(plan.estimators[e]);
        row.parameter = params[p];
        row.na_ratio = failures + successes > 0 ? static_cast<double>(failures) / (failures + successes) : 1.0;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        if (v.empty()) {
          row.mean = row.bias = row.prop_below = row.sd_sqrtN = row.rmse_sqrtN = nan;
          table.rows.push_back(row);
          continue;
        }
        const bool all_finite = std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
        double below = 0.0;
        for (double x : v) below += x <= truth ? 1.0 : 0.0;
        row.prop_below = below / static_cast<double>(v.size());
        if (!all_finite) {
          row.mean = std::numeric_limits<double>::infinity();
          row.bias = std::isfinite(truth) ? std::numeric_limits<double>::infinity() : nan;
          row.sd_sqrtN = row.rmse_sqrtN = nan;
          table.rows.push_back(row);
          continue;
        }
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double ss = 0.0, se = 0.0;
        for (double x : v) {
          ss += (x - mean) * (x - mean);
          se += (x - truth) * (x - truth);
        }
        row.mean = mean;
        const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : nan;
        row.sd_sqrtN = sd * sqrt_n;
        if (std::isfinite(truth)) {
          row.bias = mean - truth;
          row.rmse_sqrtN = std::sqrt(se / static_cast<double>(v.size())) * sqrt_n;
        } else {
          row.bias = row.rmse_sqrtN = nan;
        }
        table.rows.push_back(row);
      }
    }
  }
  return table;
}

inline const std::vector<std::string>& replication_columns() {
  static const std::vector<std::string> cols{"N",        "delta",     "estimator",  "parameter",  "mean",
                                             "bias",     "prop_below", "sd_sqrtN",  "rmse_sqrtN", "na_ratio"};
  return cols;
}

namespace detail {

inline std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline nlohmann::json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace detail

inline void write_csv(std::ostream& os, const ReplicationTable& table) {
  const auto& cols = replication_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  using detail::format_number;
  for (const auto& r : table.rows) {
    os << r.n << ',' << format_number(r.delta) << ',' << r.estimator << ',' << r.parameter << ','
       << format_number(r.mean) << ',' << format_number(r.bias) << ',' << format_number(r.prop_below) << ','
       << format_number(r.sd_sqrtN) << ',' << format_number(r.rmse_sqrtN) << ',' << format_number(r.na_ratio)
       << '\n';
  }
}

inline nlohmann::json to_json(const StudyPlan& plan) {
  nlohmann::json est = nlohmann::json::array();
  for (auto e : plan.estimators) est.push_back(estimator_name(e));
  return {{"sample_sizes", plan.sample_sizes},
          {"delta_values", plan.delta_values},
          {"replications", plan.replications},
          {"estimators", est},
          {"seed", plan.seed}};
}

inline nlohmann::json to_json(const ReplicationTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  using detail::json_number;
  for (const auto& r : table.rows) {
    nlohmann::json row = nlohmann::json::object();
    row["N"] = r.n;
    row["delta"] = r.delta;
    row["estimator"] = r.estimator;
    row["parameter"] = r.parameter;
    row["mean"] = json_number(r.mean);
    row["bias"] = json_number(r.bias);
    row["prop_below"] = json_number(r.prop_below);
    row["sd_sqrtN"] = json_number(r.sd_sqrtN);
    row["rmse_sqrtN"] = json_number(r.rmse_sqrtN);
    row["na_ratio"] = json_number(r.na_ratio);
    rows.push_back(std::move(row));
  }
  return {{"columns", replication_columns()}, {"rows", rows}};
}

/// Parses a plan document; absent keys keep their defaults.
inline StudyPlan plan_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("plan: expected a JSON object");
  StudyPlan plan;
  for (const auto& [key, value] : j.items()) {
    if (key == "sample_sizes") {
      plan.sample_sizes.clear();
      for (const auto& v : value) {
        if (!v.is_number_integer() || v.get<long long>() < 1) throw DomainError("plan: sample_sizes must be positive integers");
        plan.sample_sizes.push_back(v.get<std::size_t>());
      }
    } else if (key == "delta_values") {
      plan.delta_values = value.get<std::vector<double>>();
    } else if (key == "replications") {
      if (!value.is_number_integer()) throw DomainError("plan: replications must be an integer");
      plan.replications = value.get<int>();
    } else if (key == "estimators") {
      plan.estimators.clear();
      for (const auto& v : value) plan.estimators.push_back(parse_estimator(v.get<std::string>()));
    } else if (key == "seed") {
      if (!value.is_number_integer()) throw DomainError("plan: seed must be an integer");
      plan.seed = value.get<std::uint64_t>();
    } else {
      throw DomainError("plan: unknown key '" + key + "'");
    }
  }
  plan.validate();
  return plan;
}

// ---------------------------------------------------------------------------
// Cauchy running means

struct CauchyDemo {
  std::vector<double> y;
  std::vector<double> raw_mean;          // running mean of y[0..n)
  std::vector<double> gaussianized_mean; // mean of W_tau(n)(y[0..n)); NaN where no fit exists
  std::optional<FitResult> final_fit;
};

inline CauchyDemo cauchy_demo(std::size_t n, std::uint64_t seed) {
  if (n < kMinFitSize) throw InsufficientDataError("cauchy_demo: n must be >= " + std::to_string(kMinFitSize));
  CauchyDemo demo;
  Rng rng(seed);
  demo.y.resize(n);
  for (auto& v : demo.y) v = rng.cauchy();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    sum += demo.y[k - 1];
    demo.raw_mean.push_back(sum / static_cast<double>(k));
    if (k < 5) {
      demo.gaussianized_mean.push_back(nan);
      continue;
    }
    double g = nan;
    try {
      const std::span<const double> prefix(demo.y.data(), k);
      FitResult fit = mle_joint(prefix);
      g = sample_mean(w_tau(prefix, fit.tau));
      if (k == n) demo.final_fit = std::move(fit);
    } catch (const std::exception&) {
    }
    demo.gaussianized_mean.push_back(g);
  }
  return demo;
}

}  // namespace heavytail
