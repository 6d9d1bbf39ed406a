#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "heavytail/distribution.hpp"

using namespace heavytail;

namespace {

const std::vector<double> kDeltas{0.0, 0.1, 1.0 / 3.0};

double phi_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Integral of f over the support of d, split at the transformed location.
template <class F>
double integrate_over_support(const LambertWDist& d, F f) {
  const auto& fam = d.input().family();
  if (const auto* u = std::get_if<Uniform>(&fam)) {
    const TailParams t = d.tau();
    const double lo = h_tau(u->a, t), hi = h_tau(u->b, t), mid = t.mu_x;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, mid, 15, 1e-12) +
           boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, mid, hi, 15, 1e-12);
  }
  if (d.input().input_class() == InputClass::kScale) {
    boost::math::quadrature::exp_sinh<double> es;
    const double split = d.tau().sigma_x;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, split, 15, 1e-12) +
           es.integrate([&](double y) { return f(split + y); }, 0.0, std::numeric_limits<double>::infinity());
  }
  boost::math::quadrature::sinh_sinh<double> ss;
  const double mu = d.tau().mu_x;
  return ss.integrate([&](double y) { return f(mu + y); });
}

std::vector<std::pair<std::string, InputSpec>> families() {
  return {{"gaussian", InputSpec(Gaussian{0.5, 1.3})},
          {"gamma", InputSpec(Gamma{3.0, 2.0})},
          {"uniform", InputSpec(Uniform{-1.0, 2.0})},
          {"chisq", InputSpec(ChiSquared{4.0})},
          {"t", InputSpec(StudentT{5.0, 0.2, 0.8})},
          {"exp", InputSpec(Exponential{1.5})}};
}

// Latent value mapped to y by the forward transform, found without the inverse.
double bisect_h_tau(double y, const TailParams& t) {
  double lo = -1e6, hi = 1e6;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h_tau(mid, t) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(InputSpec, LocationScaleConventions) {
  const InputSpec g(Gamma{3.0, 2.0});
  EXPECT_EQ(g.input_class(), InputClass::kScale);
  EXPECT_EQ(g.location_scale().first, 0.0);
  EXPECT_NEAR(g.location_scale().second, std::sqrt(3.0) / 2.0, 1e-15);
  EXPECT_NEAR(g.mean(), 1.5, 1e-15);
  const InputSpec t(StudentT{5.0, 0.0, 1.0});
  EXPECT_EQ(t.input_class(), InputClass::kLocationScale);
  EXPECT_NEAR(t.location_scale().second, std::sqrt(5.0 / 3.0), 1e-15);
  const InputSpec c(ChiSquared{4.0}, InputClass::kNoncentralNonscale);
  EXPECT_EQ(c.location_scale(), std::make_pair(0.0, 1.0));
  EXPECT_EQ(InputSpec(ChiSquared{4.0}).input_class(), InputClass::kScale);
}

TEST(InputSpec, RejectsInvalidParameters) {
  EXPECT_THROW(InputSpec(Gaussian{0.0, 0.0}), DomainError);
  EXPECT_THROW(InputSpec(Uniform{1.0, 1.0}), DomainError);
  EXPECT_THROW(InputSpec(Gamma{-1.0, 1.0}), DomainError);
  EXPECT_THROW(InputSpec(StudentT{2.0, 0.0, 1.0}), DomainError);
  EXPECT_THROW(InputSpec(Exponential{0.0}), DomainError);
}

TEST(InputSpec, NaturalParametersRoundTrip) {
  for (const auto& [name, spec] : families()) {
    const auto p = spec.natural_params();
    const InputSpec again = spec.with_natural_params(p);
    const auto q = again.natural_params();
    ASSERT_EQ(p.size(), q.size());
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p[i], q[i], 1e-14 * std::max(1.0, std::fabs(p[i]))) << name;
  }
}

TEST(LambertWDist, PdfIntegratesToOne) {
  for (const auto& [name, spec] : families()) {
    for (double delta : kDeltas) {
      const LambertWDist d(spec, Tail::symmetric(delta));
      const double total = integrate_over_support(d, [&](double y) { return d.pdf(y); });
      EXPECT_NEAR(total, 1.0, 1e-6) << name << " delta=" << delta;
    }
  }
}

TEST(LambertWDist, DoubleTailPdfIntegratesToOne) {
  const LambertWDist d(InputSpec(Gaussian{0.0, 1.0}), Tail::double_tail(0.05, 0.4));
  boost::math::quadrature::sinh_sinh<double> ss;
  EXPECT_NEAR(ss.integrate([&](double y) { return d.pdf(y); }), 1.0, 1e-6);
}

TEST(LambertWDist, PdfIsDerivativeOfCdf) {
  for (const auto& [name, spec] : families()) {
    for (double delta : {0.0, 0.1, 1.0 / 3.0, 1.0}) {
      const LambertWDist d(spec, Tail::symmetric(delta));
      for (int i = 1; i < 20; ++i) {
        const double y = d.quantile(i / 20.0);
        const double h = 1e-5 * std::max(1.0, std::fabs(y));
        const double fd = (d.cdf(y + h) - d.cdf(y - h)) / (2.0 * h);
        EXPECT_NEAR(d.pdf(y), fd, 1e-5 * std::max(1.0, fd)) << name << " delta=" << delta << " y=" << y;
      }
    }
  }
}

TEST(LambertWDist, CdfMonotoneWithLimits) {
  for (const auto& [name, spec] : families()) {
    const LambertWDist d(spec, Tail::double_tail(0.2, 0.6));
    double prev = 0.0;
    for (int i = -400; i <= 400; ++i) {
      const double c = d.cdf(i * 0.25);
      EXPECT_GE(c, prev) << name;
      EXPECT_LE(c, 1.0);
      prev = c;
    }
    // Heavy inputs keep visible mass beyond 1e12, so the limit is taken from the latent quantile.
    for (double y : {-1e12, 1e12}) {
      const double x = bisect_h_tau(y, d.tau());
      EXPECT_NEAR(d.cdf(y), spec.cdf(x), 1e-9) << name << " y=" << y;
    }
    EXPECT_EQ(d.cdf(-std::numeric_limits<double>::infinity()), 0.0) << name;
    EXPECT_EQ(d.cdf(std::numeric_limits<double>::infinity()), 1.0) << name;
  }
}

TEST(LambertWDist, GaussianValues) {
  const LambertWDist d = tukey_h(0.0, 1.0, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(d.cdf(0.0), 0.5);
  EXPECT_NEAR(d.cdf(2.0), phi_cdf(w_delta(2.0, 1.0 / 3.0)), 1e-15);
  EXPECT_NEAR(tukey_h(0, 1, 0).pdf(0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-16);
  EXPECT_NEAR(tukey_h(0, 1, 0.25).pdf(0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-16);
  EXPECT_DOUBLE_EQ(tukey_h(3.0, 2.0, 0.7).cdf(3.0), 0.5);
}

TEST(LambertWDist, ZeroDeltaReducesToInput) {
  for (const auto& [name, spec] : families()) {
    const LambertWDist d(spec, Tail::symmetric(0.0));
    for (int i = 1; i < 40; ++i) {
      const double p = i / 40.0;
      const double x = spec.quantile(p);
      EXPECT_EQ(d.quantile(p), x) << name;
      EXPECT_EQ(d.cdf(x), spec.cdf(x)) << name;
      EXPECT_EQ(d.pdf(x), spec.pdf(x)) << name;
    }
  }
}

TEST(LambertWDist, QuantileInvertsCdf) {
  for (const auto& [name, spec] : families()) {
    for (double delta : {0.1, 1.0 / 3.0, 2.0}) {
      const LambertWDist d(spec, Tail::symmetric(delta));
      for (double p : {1e-6, 0.01, 0.1, 0.37, 0.5, 0.8, 0.99, 1 - 1e-6}) {
        EXPECT_NEAR(d.cdf(d.quantile(p)), p, 1e-9) << name << " " << delta << " " << p;
      }
    }
  }
}

TEST(LambertWDist, QuantileValues) {
  EXPECT_EQ(tukey_h(1.5, 2.0, 0.8).quantile(0.5), 1.5);
  const double q = tukey_h(0.0, 1.0, 0.2).quantile(0.975);
  EXPECT_NEAR(q, h_delta(1.959963984540054, 0.2), 1e-12);
  EXPECT_NEAR(tukey_h(0.0, 1.0, 0.2).cdf(q), 0.975, 1e-12);
  EXPECT_THROW(tukey_h(0, 1, 0.1).quantile(0.0), DomainError);
  EXPECT_THROW(tukey_h(0, 1, 0.1).quantile(1.0), DomainError);
  EXPECT_THROW(tukey_h(0, 1, 0.1).quantile(std::nan("")), DomainError);
}

TEST(LambertWDist, ScaleFamilySupportStaysNonnegative) {
  const LambertWDist d(InputSpec(Gamma{2.0, 1.0}), Tail::symmetric(0.5));
  EXPECT_EQ(d.tau().mu_x, 0.0);
  EXPECT_EQ(d.cdf(-1.0), 0.0);
  EXPECT_EQ(d.pdf(-1.0), 0.0);
  EXPECT_GT(d.quantile(1e-9), 0.0);
}

TEST(StudentTInput, ReducesToScaledT) {
  const boost::math::students_t_distribution<double> t5(5.0);
  const double s = std::sqrt(5.0 / 3.0);
  const TailParams tau{0.0, 1.0, Tail::symmetric(0.0)};
  EXPECT_NEAR(pdf_student_t_input(5.0, tau, 0.0), boost::math::pdf(t5, 0.0) * s, 1e-15);
  EXPECT_NEAR(pdf_student_t_input(5.0, tau, 1.3), boost::math::pdf(t5, 1.3 * s) * s, 1e-15);
}

TEST(StudentTInput, Normalization) {
  boost::math::quadrature::sinh_sinh<double> ss;
  for (double delta : {0.0, 0.2, 1.0 / 3.0}) {
    const TailParams tau{0.4, 1.5, Tail::symmetric(delta)};
    const double total = ss.integrate([&](double z) { return pdf_student_t_input(5.0, tau, 0.4 + z); });
    EXPECT_NEAR(total, 1.0, 1e-6) << delta;
  }
  const TailParams tau{0.0, 1.0, Tail::symmetric(0.2)};
  const LambertWDist d(InputSpec(StudentT{5.0, 0.0, std::sqrt(3.0 / 5.0)}), Tail::symmetric(0.2));
  const double window = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double z) { return pdf_student_t_input(5.0, tau, z); }, -200.0, 200.0, 20, 1e-13);
  EXPECT_NEAR(window, d.cdf(200.0) - d.cdf(-200.0), 1e-7);
}

TEST(StudentTInput, MatchesGenericDistribution) {
  const TailParams tau{1.0, 2.0, Tail::symmetric(0.3)};
  const double nu = 7.0;
  const LambertWDist d(InputSpec(StudentT{nu, 1.0, 2.0 * std::sqrt((nu - 2.0) / nu)}), Tail::symmetric(0.3));
  for (double z : {-10.0, -1.0, 0.0, 0.5, 3.0, 40.0}) {
    EXPECT_NEAR(pdf_student_t_input(nu, tau, z), d.pdf(z), 1e-14 * std::max(1.0, d.pdf(z)));
  }
}

TEST(StudentTInput, LargeNuApproachesGaussian) {
  const TailParams tau{0.0, 1.0, Tail::symmetric(0.3)};
  EXPECT_NEAR(pdf_student_t_input(1e6, tau, 1.0), tukey_h(0, 1, 0.3).pdf(1.0), 1e-4);
}

TEST(StudentTInput, Errors) {
  EXPECT_THROW(pdf_student_t_input(2.0, TailParams{}, 0.0), DomainError);
  EXPECT_THROW(pdf_student_t_input(5.0, TailParams{0, 1, Tail::double_tail(0.1, 0.2)}, 0.0), DomainError);
}

TEST(Moments, GaussianClosedForm) {
  EXPECT_EQ(moment_gaussian(2, 0.0).value(), 1.0);
  EXPECT_NEAR(moment_gaussian(2, 1.0 / 3.0).value(), std::pow(3.0, 1.5), 1e-12);
  EXPECT_NEAR(std::sqrt(moment_gaussian(2, 1.0 / 3.0).value()), 2.2795, 5e-4);
  EXPECT_FALSE(moment_gaussian(4, 0.3).has_value());
  EXPECT_FALSE(moment_gaussian(2, 0.5).has_value());
  EXPECT_EQ(moment_gaussian(3, 0.1).value(), 0.0);
  EXPECT_EQ(moment_gaussian(4, 0.0).value(), 3.0);
  EXPECT_THROW(moment_gaussian(0, 0.1), DomainError);
  EXPECT_THROW(moment_gaussian(2, -0.1), DomainError);
}

TEST(Moments, GaussianAgainstQuadrature) {
  boost::math::quadrature::sinh_sinh<double> ss;
  const std::vector<std::pair<double, int>> cases{{0.05, 2}, {0.05, 4}, {0.1, 2}, {0.1, 4}, {0.2, 2}, {0.3, 2}};
  for (const auto& [delta, n] : cases) {
    const LambertWDist d = tukey_h(0.0, 1.0, delta);
    const double ref = ss.integrate([&](double y) {
      const double p = d.pdf(y);
      return p == 0.0 ? 0.0 : std::pow(y, n) * p;
    });
    EXPECT_NEAR(moment_gaussian(n, delta).value(), ref, 1e-6 * ref) << delta << " " << n;
  }
}

TEST(Moments, KurtosisAndVarianceFactor) {
  EXPECT_EQ(kurtosis_gaussian(0.0).value(), 3.0);
  EXPECT_NEAR(kurtosis_gaussian(0.1).value(), 5.5082, 1e-3);
  const double taylor = 3.0 + 12.0 * 0.05 + 66.0 * 0.05 * 0.05;
  EXPECT_NEAR(kurtosis_gaussian(0.05).value(), taylor, 0.02 * taylor);
  EXPECT_FALSE(kurtosis_gaussian(0.25).has_value());
  double prev = 0.0;
  for (double d = 0.0; d < 0.25; d += 0.005) {
    const double k = kurtosis_gaussian(d).value();
    EXPECT_GT(k, prev);
    prev = k;
  }
  const double m2 = moment_gaussian(2, 0.1).value(), m4 = moment_gaussian(4, 0.1).value();
  EXPECT_NEAR(kurtosis_gaussian(0.1).value(), m4 / (m2 * m2), 1e-12);

  EXPECT_EQ(variance_factor(0.0).value(), 1.0);
  EXPECT_NEAR(variance_factor(0.1).value(), 1.182, 5e-4);
  EXPECT_NEAR(variance_factor(1.0 / 3.0).value(), 2.2795, 5e-4);
  EXPECT_FALSE(variance_factor(0.5).has_value());
  EXPECT_NEAR(variance_factor(0.2).value(), std::sqrt(moment_gaussian(2, 0.2).value()), 1e-14);
}

TEST(Moments, StudentTAndTailIndex) {
  EXPECT_NEAR(kurtosis_student_t(1e8).value(), 3.0, 1e-6);
  EXPECT_EQ(kurtosis_student_t(6.0).value(), 6.0);
  EXPECT_FALSE(kurtosis_student_t(4.0).has_value());
  EXPECT_EQ(tail_index(0.25), 4.0);
  EXPECT_EQ(tail_index(0.0), std::numeric_limits<double>::infinity());
  EXPECT_THROW(tail_index(-1.0), DomainError);
}
