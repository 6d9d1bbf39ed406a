#pragma once

// Small derivative-free optimizer and finite-difference curvature helpers.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace heavytail::optim {

using Vector = std::vector<double>;

struct NelderMeadOptions {
  int max_evals = 5000;
  double f_tol = 1e-10;  // absolute spread of simplex values
  double x_tol = 1e-9;   // max vertex distance from the best vertex (inf-norm)
  int restarts = 2;      // fresh simplices built around the incumbent
};

struct NelderMeadResult {
  Vector x;
  double f = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

inline double finite_or_inf(double v) { return std::isfinite(v) ? v : std::numeric_limits<double>::infinity(); }

}  // namespace detail

/// Minimizes `f` with the Nelder-Mead simplex method.
///
/// Non-finite objective values rank as +inf, so the simplex retreats from them.
/// When a vertex of a fresh simplex is non-finite its offset is halved until the
/// vertex evaluates finitely. After convergence up to `restarts` new simplices
/// are built around the best point; the search stops once a restart no longer
/// improves the objective by more than f_tol.
template <class Objective>
NelderMeadResult nelder_mead(Objective&& f, Vector x0, const Vector& steps, const NelderMeadOptions& opt = {}) {
  const std::size_t n = x0.size();
  NelderMeadResult best;
  int evals = 0;
  auto eval = [&](const Vector& x) {
    ++evals;
    return detail::finite_or_inf(f(x));
  };

  Vector start = std::move(x0);
  double start_f = eval(start);
  best.x = start;
  best.f = start_f;
  Vector scale = steps;

  for (int round = 0; round <= opt.restarts; ++round) {
    std::vector<Vector> simplex(n + 1, start);
    Vector values(n + 1, start_f);
    for (std::size_t i = 0; i < n; ++i) {
      double step = scale[i];
      for (int tries = 0; tries < 40; ++tries) {
        simplex[i + 1] = start;
        simplex[i + 1][i] += step;
        values[i + 1] = eval(simplex[i + 1]);
        if (std::isfinite(values[i + 1])) break;
        step *= (tries % 2 == 0) ? -1.0 : 0.5;
      }
    }

    std::vector<std::size_t> order(n + 1);
    bool converged = false;
    Vector centroid(n), trial(n), trial2(n);
    while (evals < opt.max_evals) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
      const std::size_t lo = order.front();
      const std::size_t hi = order.back();
      const std::size_t second = order[n - 1];

      double spread_x = 0.0;
      for (std::size_t v = 0; v <= n; ++v) {
        for (std::size_t k = 0; k < n; ++k) {
          spread_x = std::max(spread_x, std::fabs(simplex[v][k] - simplex[lo][k]));
        }
      }
      if (std::isfinite(values[hi]) && values[hi] - values[lo] <= opt.f_tol && spread_x <= opt.x_tol) {
        converged = true;
        break;
      }
      if (spread_x <= 1e-15 * (1.0 + std::fabs(simplex[lo][0]))) {
        converged = values[hi] - values[lo] <= opt.f_tol;
        break;
      }

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t v = 0; v <= n; ++v) {
        if (v == hi) continue;
        for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[v][k] / static_cast<double>(n);
      }

      for (std::size_t k = 0; k < n; ++k) trial[k] = centroid[k] + (centroid[k] - simplex[hi][k]);
      const double f_reflect = eval(trial);
      if (f_reflect < values[lo]) {
        for (std::size_t k = 0; k < n; ++k) trial2[k] = centroid[k] + 2.0 * (centroid[k] - simplex[hi][k]);
        const double f_expand = eval(trial2);
        if (f_expand < f_reflect) {
          simplex[hi] = trial2;
          values[hi] = f_expand;
        } else {
          simplex[hi] = trial;
          values[hi] = f_reflect;
        }
        continue;
      }
      if (f_reflect < values[second]) {
        simplex[hi] = trial;
        values[hi] = f_reflect;
        continue;
      }
      const bool outside = f_reflect < values[hi];
      for (std::size_t k = 0; k < n; ++k) {
        trial2[k] = outside ? centroid[k] + 0.5 * (trial[k] - centroid[k])
                            : centroid[k] + 0.5 * (simplex[hi][k] - centroid[k]);
      }
      const double f_contract = eval(trial2);
      if (f_contract < std::min(f_reflect, values[hi])) {
        simplex[hi] = trial2;
        values[hi] = f_contract;
        continue;
      }
      for (std::size_t v = 0; v <= n; ++v) {
        if (v == lo) continue;
        for (std::size_t k = 0; k < n; ++k) simplex[v][k] = simplex[lo][k] + 0.5 * (simplex[v][k] - simplex[lo][k]);
        values[v] = eval(simplex[v]);
      }
    }

    const auto it = std::min_element(values.begin(), values.end());
    const std::size_t lo = static_cast<std::size_t>(it - values.begin());
    const double improvement = best.f - values[lo];
    if (values[lo] < best.f) {
      best.x = simplex[lo];
      best.f = values[lo];
    }
    best.converged = converged;
    if (round > 0 && !(improvement > opt.f_tol)) break;
    if (evals >= opt.max_evals) break;
    start = best.x;
    start_f = best.f;
    for (std::size_t i = 0; i < n; ++i) scale[i] = 0.25 * steps[i];
  }
  best.evaluations = evals;
  return best;
}

/// Central-difference Hessian of f at x; step_i = max(1e-4, 1e-4 |x_i|) unless given.
template <class Objective>
Eigen::MatrixXd numeric_hessian(Objective&& f, const Vector& x, Vector steps = {}) {
  const std::size_t n = x.size();
  if (steps.empty()) {
    steps.resize(n);
    for (std::size_t i = 0; i < n; ++i) steps[i] = std::max(1e-4, 1e-4 * std::fabs(x[i]));
  }
  Eigen::MatrixXd h(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double f0 = f(x);
  auto shifted = [&](std::size_t i, double di, std::size_t j, double dj) {
    Vector p = x;
    p[i] += di;
    p[j] += dj;
    return f(p);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double hi = steps[i];
    const auto ii = static_cast<Eigen::Index>(i);
    h(ii, ii) = (shifted(i, hi, i, 0.0) - 2.0 * f0 + shifted(i, -hi, i, 0.0)) / (hi * hi);
    for (std::size_t j = 0; j < i; ++j) {
      const double hj = steps[j];
      const auto jj = static_cast<Eigen::Index>(j);
      const double v = (shifted(i, hi, j, hj) - shifted(i, hi, j, -hj) - shifted(i, -hi, j, hj) +
                        shifted(i, -hi, j, -hj)) /
                       (4.0 * hi * hj);
      h(ii, jj) = v;
      h(jj, ii) = v;
    }
  }
  return h;
}

/// Symmetric pseudo-inverse; eigenvalues below rcond * max|eigenvalue| are dropped.
inline Eigen::MatrixXd symmetric_pseudo_inverse(const Eigen::MatrixXd& a, double rcond = 1e-12) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cutoff = rcond * ev.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > cutoff) inv[i] = 1.0 / ev[i];
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace heavytail::optim
