#pragma once

#include <cmath>
#include <cstddef>

#include "fbmlab/types.hpp"

namespace fbmlab {

// Standard normal CDF via the complementary error function; absolute error is
// at the erfc level (~1e-16), which the pricing reduction tests rely on.
template <class Scalar = double>
Scalar normal_cdf(Scalar x) {
  return Scalar(0.5) * std::erfc(-x / std::sqrt(Scalar(2)));
}

// Wichura's PPND16 rational approximations for the standard normal quantile,
// good to ~1e-15 over (0, 1).
double normal_quantile(double p);

// P(sup |Brownian bridge| > lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)
double kolmogorov_sf(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

// One-sample Kolmogorov-Smirnov test against the standard normal.
// Requires at least 8 samples; p-value from the asymptotic distribution with
// the small-sample effective-size correction (sqrt(n) + 0.12 + 0.11/sqrt(n)).
KsResult ks_test_standard_normal(VectorXd samples);

// Two-sample Kolmogorov-Smirnov test.
KsResult ks_test_two_sample(VectorXd a, VectorXd b);

inline double mean(const VectorXd& v) { return v.mean(); }

// population variance (divides by n), so mse = var + bias^2 holds exactly
inline double variance(const VectorXd& v) {
  const double m = v.mean();
  return (v.array() - m).square().mean();
}

inline double mean_squared_error(const VectorXd& v, double target) {
  return (v.array() - target).square().mean();
}

}  // namespace fbmlab
