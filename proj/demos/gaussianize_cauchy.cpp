// Fit a heavy-tail Lambert W x Gaussian model to Cauchy draws and back-transform them.
#include <cstdio>
#include <cstdlib>

#include "heavytail/heavytail.hpp"

using namespace heavytail;

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 500;
  Rng rng(argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 2024);
  std::vector<double> y(n);
  for (double& v : y) v = rng.cauchy();

  const FitResult fit = mle_joint(y);
  const auto x = w_tau(std::span<const double>(y), fit.tau);
  std::printf("n = %zu, fitted tau = %s\n", n, format_tau(fit.tau).c_str());
  for (const auto& p : fit.estimates) std::printf("  %-8s %10.4f\n", p.name.c_str(), p.value);

  const auto ad_y = anderson_darling(y), ad_x = anderson_darling(x);
  std::printf("\n%-12s %12s %12s\n", "", "cauchy", "gaussianized");
  std::printf("%-12s %12.4g %12.4g\n", "sd", sample_sd(y), sample_sd(x));
  std::printf("%-12s %12.4g %12.4g\n", "kurtosis", sample_kurtosis(y), sample_kurtosis(x));
  std::printf("%-12s %12.4g %12.4g\n", "AD p-value", ad_y.p_value, ad_x.p_value);
}
