#include "fbmlab/pricing.hpp"

#include <cmath>
#include <limits>

#include "fbmlab/stats.hpp"

namespace fbmlab {

OptionQuote call_price_from_variance(double spot, double strike, double rate_integral,
                                     double total_variance) {
  if (!(spot > 0.0) || !(strike > 0.0))
    throw config_error("pricing: spot and strike must be > 0");
  OptionQuote q;
  q.spot = spot;
  q.strike = strike;
  q.rate_integral = rate_integral;
  q.total_variance = total_variance;
  const double discounted_strike = strike * std::exp(-rate_integral);
  if (!(total_variance > 0.0)) {
    q.degenerate = true;
    q.price = std::max(spot - discounted_strike, 0.0);
    const double inf = std::numeric_limits<double>::infinity();
    q.d1 = (spot >= discounted_strike) ? inf : -inf;
    q.d2 = q.d1;
    return q;
  }
  const double root_v = std::sqrt(total_variance);
  q.d1 = (std::log(spot / strike) + rate_integral + 0.5 * total_variance) / root_v;
  q.d2 = q.d1 - root_v;
  q.price = spot * normal_cdf(q.d1) - discounted_strike * normal_cdf(q.d2);
  return q;
}

OptionQuote call_price_const(double spot, double strike, double rate, double sigma,
                             HurstParameter hurst, double t, double maturity) {
  if (!(sigma > 0.0)) throw config_error("pricing: sigma must be > 0");
  if (!(t >= 0.0) || !(maturity >= t))
    throw config_error("pricing: need 0 <= t <= maturity");
  const double two_h = hurst.two_h();
  const double v =
      sigma * sigma * (std::pow(maturity, two_h) - std::pow(t, two_h));
  OptionQuote q = call_price_from_variance(spot, strike, rate * (maturity - t), v);
  q.hurst = hurst.value();
  q.t = t;
  q.maturity = maturity;
  return q;
}

OptionQuote call_price_tv(double spot, double strike, double rate_integral,
                          const VolatilitySpec& vol, HurstParameter hurst, double t,
                          double maturity, const QuadratureConfig& quad) {
  hurst.require_long_memory("pricing");
  if (!(t >= 0.0) || !(maturity >= t))
    throw config_error("pricing: need 0 <= t <= maturity");
  const double v =
      theta_total(vol, maturity, hurst, quad) - theta_total(vol, t, hurst, quad);
  OptionQuote q = call_price_from_variance(spot, strike, rate_integral, v);
  q.hurst = hurst.value();
  q.t = t;
  q.maturity = maturity;
  return q;
}

PriceInterval price_interval(double spot, double strike, double rate_integral,
                             double variance_low, double variance_high) {
  if (variance_low > variance_high)
    throw config_error("pricing: variance interval must satisfy low <= high");
  PriceInterval out;
  if (variance_low < 0.0) {
    variance_low = 0.0;
    variance_high = std::max(variance_high, 0.0);
    out.clipped_at_zero = true;
  }
  out.low = call_price_from_variance(spot, strike, rate_integral, variance_low);
  out.high = call_price_from_variance(spot, strike, rate_integral, variance_high);
  return out;
}

}  // namespace fbmlab
