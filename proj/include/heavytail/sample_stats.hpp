#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "heavytail/error.hpp"

namespace heavytail {

struct SampleMoments {
  double mean = 0.0;
  double sd = 0.0;  // unbiased (N - 1)
  std::optional<double> skewness;
  std::optional<double> kurtosis;  // non-excess, 3 for Gaussian data
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

inline double sample_mean(std::span<const double> x) {
  if (x.empty()) throw InsufficientDataError("sample_mean: empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double sample_sd(std::span<const double> x) {
  if (x.size() < 2) throw InsufficientDataError("sample_sd: need at least 2 values");
  const double m = sample_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

inline double sample_median(std::span<const double> x) {
  if (x.empty()) throw InsufficientDataError("sample_median: empty sample");
  std::vector<double> v(x.begin(), x.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

// Type-7 (linear interpolation) sample quantile.
inline double sample_quantile(std::span<const double> x, double p) {
  if (x.empty()) throw InsufficientDataError("sample_quantile: empty sample");
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

namespace detail {

struct CentralMoments {
  double mean, m2, m3, m4;
};

inline CentralMoments central_moments(std::span<const double> x) {
  const double m = sample_mean(x);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - m;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const auto n = static_cast<double>(x.size());
  return {m, m2 / n, m3 / n, m4 / n};
}

}  // namespace detail

/// m4 / m2^2 with biased central moments.
inline double sample_kurtosis(std::span<const double> x) {
  if (x.size() < 4) throw InsufficientDataError("sample_kurtosis: need at least 4 values");
  const auto c = detail::central_moments(x);
  if (!(c.m2 > 0.0)) throw InsufficientDataError("sample_kurtosis: zero variance");
  return c.m4 / (c.m2 * c.m2);
}

inline double sample_skewness(std::span<const double> x) {
  if (x.size() < 3) throw InsufficientDataError("sample_skewness: need at least 3 values");
  const auto c = detail::central_moments(x);
  if (!(c.m2 > 0.0)) throw InsufficientDataError("sample_skewness: zero variance");
  return c.m3 / std::pow(c.m2, 1.5);
}

/// Location, scale and shape summary. Throws for N < 2 or zero variance;
/// skewness and kurtosis are left empty for N < 4.
inline SampleMoments sample_moments(std::span<const double> x) {
  if (x.size() < 2) throw InsufficientDataError("sample_moments: need at least 2 values");
  SampleMoments s;
  const auto c = detail::central_moments(x);
  if (!(c.m2 > 0.0)) throw InsufficientDataError("sample_moments: zero variance");
  s.mean = c.mean;
  s.sd = std::sqrt(c.m2 * static_cast<double>(x.size()) / static_cast<double>(x.size() - 1));
  if (x.size() >= 4) {
    s.skewness = c.m3 / std::pow(c.m2, 1.5);
    s.kurtosis = c.m4 / (c.m2 * c.m2);
  }
  s.median = sample_median(x);
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

}  // namespace heavytail
