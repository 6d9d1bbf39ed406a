// Principal branch of Lambert W and the heavy-tail transform on a few points.
#include <cmath>
#include <algorithm>
#include <cstdio>

#include "heavytail/heavytail.hpp"

using namespace heavytail;

int main() {
  std::printf("%14s %22s %12s\n", "x", "W0(x)", "rel resid");
  for (double x : {-std::exp(-1.0), -0.2, 0.0, 1e-8, 0.5, 1.0, std::exp(1.0), 1e3, 1e12}) {
    const double w = lambert_w0(x);
    std::printf("%14.6g %22.15g %12.3g\n", x, w, (w * std::exp(w) - x) / std::max(1.0, std::fabs(x)));
  }

  std::printf("\ndelta  variance factor  kurtosis\n");
  for (double d : {0.0, 0.1, 1.0 / 3.0, 0.2}) {
    const auto v = variance_factor(d);
    const auto k = kurtosis_gaussian(d);
    std::printf("%5.3f  %15.6f  %8.4f\n", d, v.value_or(INFINITY), k.value_or(INFINITY));
  }

  const double delta = 0.5;
  std::printf("\nu      H(u)        W(H(u))   (delta = %.1f)\n", delta);
  for (double u : {-3.0, -1.0, 0.0, 0.5, 2.0, 4.0}) {
    const double z = h_delta(u, delta);
    std::printf("%5.1f  %10.4f  %8.4f\n", u, z, w_delta(z, delta));
  }
}
