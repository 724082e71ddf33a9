#include "fbmlab/inference.hpp"

#include <cmath>

#include "fbmlab/stats.hpp"

namespace fbmlab {

namespace {

double qv_from_log_increments(const VectorXd& dlog, double step, HurstParameter hurst) {
  const Index n = dlog.size();
  return dlog.squaredNorm() / (static_cast<double>(n) * std::pow(step, hurst.two_h()));
}

}  // namespace

double qv_estimate(const PricePath& path, HurstParameter hurst) {
  const Index n = path.log_prices.size() - 1;
  if (n < 1) throw config_error("inference: need at least 2 observations");
  const double step = path.times[1] - path.times[0];
  return qv_from_log_increments(
      path.log_prices.tail(n) - path.log_prices.head(n), step, hurst);
}

double qv_estimate(const VectorXd& times, const VectorXd& prices, HurstParameter hurst) {
  const Index n = times.size() - 1;
  if (n < 1 || prices.size() != times.size())
    throw config_error("inference: need at least 2 matching (time, price) rows");
  const double step = times[1] - times[0];
  if (!(step > 0.0)) throw config_error("inference: times must be increasing");
  for (Index k = 0; k < n; ++k) {
    if (std::abs(times[k + 1] - times[k] - step) > 1e-9 * step)
      throw config_error("inference: only uniform grids are supported");
    if (!(prices[k] > 0.0) || !(prices[k + 1] > 0.0))
      throw config_error("inference: prices must be positive");
  }
  VectorXd dlog(n);
  for (Index k = 0; k < n; ++k) dlog[k] = std::log(prices[k + 1]) - std::log(prices[k]);
  return qv_from_log_increments(dlog, step, hurst);
}

namespace {

double lag_correlation(double k, double two_h) {
  return 0.5 * (std::pow(k + 1.0, two_h) + std::pow(std::abs(k - 1.0), two_h) -
                2.0 * std::pow(k, two_h));
}

}  // namespace

double asymptotic_variance_const(double sigma2, HurstParameter hurst, Index terms) {
  hurst.require_clt_regime("inference");
  if (terms < 1) throw config_error("inference: series needs at least one term");
  const double two_h = hurst.two_h();
  double acc = 0.0;
  for (Index k = terms; k >= 1; --k) {  // small terms first
    const double r = lag_correlation(static_cast<double>(k), two_h);
    acc += r * r;
  }
  return 2.0 * sigma2 * sigma2 * (1.0 + 2.0 * acc);
}

double asymptotic_variance_const_tail(double sigma2, HurstParameter hurst, Index terms) {
  const double h = hurst.value();
  if (h == 0.5) return 0.0;
  // r(k)^2 <= (H(2H-1))^2 k^{4H-4}, summed from `terms` by the integral bound
  const double c = h * std::abs(2.0 * h - 1.0);
  const double tail =
      c * c * std::pow(static_cast<double>(terms), 4.0 * h - 3.0) / (3.0 - 4.0 * h);
  return 4.0 * sigma2 * sigma2 * tail;
}

double asymptotic_variance_const_unhalved(double sigma2, HurstParameter hurst, Index terms) {
  hurst.require_clt_regime("inference");
  const double two_h = hurst.two_h();
  double acc = 0.0;
  for (Index k = terms; k >= 2; --k) {
    const double d = 2.0 * lag_correlation(static_cast<double>(k), two_h);
    acc += d * d;
  }
  const double lag1 = std::pow(2.0, two_h) - 1.0;
  return 2.0 * sigma2 * sigma2 * (1.0 + 2.0 * lag1 * lag1 + acc);
}

double asymptotic_variance_tv(const MatrixXd& gram, const UniformGrid& grid,
                              HurstParameter hurst) {
  hurst.require_long_memory("inference");
  hurst.require_clt_regime("inference");
  const double n = static_cast<double>(grid.n);
  return 2.0 * n * std::pow(grid.step(), 2.0 - 2.0 * hurst.two_h()) *
         gram.squaredNorm();
}

double asymptotic_variance_tv(const VolatilitySpec& vol, const UniformGrid& grid,
                              HurstParameter hurst, const QuadratureConfig& quad) {
  hurst.require_long_memory("inference");
  hurst.require_clt_regime("inference");
  return asymptotic_variance_tv(eta_covariance(vol, grid, hurst, quad), grid, hurst);
}

double normalized_statistic(double estimate, double target, double variance, Index n) {
  if (!(variance > 0.0)) throw config_error("inference: variance must be > 0");
  return std::sqrt(static_cast<double>(n)) * (estimate - target) / std::sqrt(variance);
}

ConfidenceInterval confidence_interval(double estimate, double variance, Index n,
                                       double level) {
  if (!(level > 0.0 && level < 1.0))
    throw config_error("inference: confidence level must lie in (0, 1)");
  if (!(variance >= 0.0)) throw config_error("inference: variance must be >= 0");
  const double half =
      normal_quantile(0.5 * (1.0 + level)) * std::sqrt(variance / static_cast<double>(n));
  return {estimate - half, estimate + half};
}

EstimateReport estimate_sigma2(const VectorXd& times, const VectorXd& prices,
                               HurstParameter hurst, double level) {
  hurst.require_clt_regime("inference");
  const double est = qv_estimate(times, prices, hurst);
  const Index n = times.size() - 1;
  const double asyv = asymptotic_variance_const(est, hurst);
  const auto ci = confidence_interval(est, asyv, n, level);
  return {est, est, asyv, n, ci.low, ci.high, level};
}

double qv_estimator_mean_const(double sigma2, HurstParameter hurst, Index n) {
  const double two_h = hurst.two_h();
  double acc = 0.0;
  for (Index k = 0; k < n; ++k) {
    const double d = std::pow(static_cast<double>(k + 1) / n, two_h) -
                     std::pow(static_cast<double>(k) / n, two_h);
    acc += d * d;
  }
  return sigma2 + 0.25 * sigma2 * sigma2 * std::pow(static_cast<double>(n), two_h - 1.0) * acc;
}

}  // namespace fbmlab
