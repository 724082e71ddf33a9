#pragma once

#include "fbmlab/fractional_calculus.hpp"
#include "fbmlab/market.hpp"
#include "fbmlab/types.hpp"

namespace fbmlab {

// Quadratic-variation estimation of (integrated) volatility from uniform
// high-frequency observations, with the asymptotic variances of the H < 3/4
// central limit regime and the confidence intervals they induce.

// sigma_hat^2 = (1 / (N h^{2H})) sum (log S_{t_{k+1}} - log S_{t_k})^2
double qv_estimate(const PricePath& path, HurstParameter hurst);
double qv_estimate(const VectorXd& times, const VectorXd& prices, HurstParameter hurst);

// Asymptotic variance of sqrt(N) (sigma_hat^2 - sigma^2) under constant
// volatility:  2 sigma^4 (1 + 2 sum_{k=1..K} r(k)^2) with
// r(k) = [(k+1)^{2H} + (k-1)^{2H} - 2 k^{2H}] / 2 the unit-lag fGn
// correlation.  Reduces to 2 sigma^4 at H = 1/2; the series converges for
// H < 3/4 (r(k)^2 ~ k^{4H-4}).
double asymptotic_variance_const(double sigma2, HurstParameter hurst, Index terms = 1'000'000);

// Bound on the truncation error of the series above, from the k^{4H-4} decay.
double asymptotic_variance_const_tail(double sigma2, HurstParameter hurst, Index terms);

// Diagnostic variant with unhalved lag weights, as sometimes printed in the
// literature.  It fails the Brownian sanity limit (gives 6 sigma^4 instead of
// 2 sigma^4 at H = 1/2); kept so reports can show both values side by side.
double asymptotic_variance_const_unhalved(double sigma2, HurstParameter hurst,
                                          Index terms = 1'000'000);

// Finite-N variance of the time-varying CLT statistic, from the eta Gram
// matrix:  S_N = N h^{2-4H} * 2 * ||Gram||_F^2  (= N^{4H-1} 2 sum <f_k,f_j>^2
// on the unit horizon).  Needs H in (1/2, 3/4).
double asymptotic_variance_tv(const VolatilitySpec& vol, const UniformGrid& grid,
                              HurstParameter hurst, const QuadratureConfig& quad = {});
double asymptotic_variance_tv(const MatrixXd& gram, const UniformGrid& grid,
                              HurstParameter hurst);

// sqrt(N) (estimate - target) / sqrt(variance)
double normalized_statistic(double estimate, double target, double variance, Index n);

struct ConfidenceInterval {
  double low = 0.0;
  double high = 0.0;
};

// estimate +- z_{(1+level)/2} sqrt(variance / N)
ConfidenceInterval confidence_interval(double estimate, double variance, Index n,
                                       double level);

struct EstimateReport {
  double sigma2_hat = 0.0;
  double target = 0.0;  // sigma^2 or tilde_theta, depending on the experiment
  double asymptotic_variance = 0.0;
  Index n = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double level = 0.0;
};

// Point estimate with a plug-in CLT interval (sigma_hat^2 substituted into
// the asymptotic variance).  Requires H < 3/4.
EstimateReport estimate_sigma2(const VectorXd& times, const VectorXd& prices,
                               HurstParameter hurst, double level = 0.95);

// Exact finite-N mean of the estimator under constant volatility:
//   sigma^2 + sigma^4 N^{2H-1} sum_k ((t_{k+1}/T)^{2H} - (t_k/T)^{2H})^2 / 4.
// The second term is the geometric-correction bias, the quantity behind the
// visible upward bias near H = 3/4.
double qv_estimator_mean_const(double sigma2, HurstParameter hurst, Index n);

}  // namespace fbmlab
