#pragma once

#include "fbmlab/fractional_calculus.hpp"
#include "fbmlab/types.hpp"
#include "fbmlab/volatility.hpp"

namespace fbmlab {

// European call pricing in the fractional exponential model.  Every price is
// the Black-Scholes form evaluated at a total variance v:
//   constant sigma:      v = sigma^2 (T^{2H} - t^{2H})
//   time-varying sigma:  v = theta(T) - theta(t)
// with d1 = [ln(S/K) + (r_T - r_t) + v/2] / sqrt(v), d2 = d1 - sqrt(v).
// Prices are non-decreasing in v, which is what turns confidence intervals
// for the variance into price intervals.

struct OptionQuote {
  double price = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  // inputs echo
  double spot = 0.0;
  double strike = 0.0;
  double rate_integral = 0.0;  // r_tilde(T) - r_tilde(t)
  double hurst = 0.0;
  double t = 0.0;
  double maturity = 0.0;
  double total_variance = 0.0;
  bool degenerate = false;  // v <= 0: discounted intrinsic value, d's are +-inf
};

// Black-Scholes form at explicit total variance; the shared core of the
// constant and time-varying quotes and of price intervals.
OptionQuote call_price_from_variance(double spot, double strike, double rate_integral,
                                     double total_variance);

OptionQuote call_price_const(double spot, double strike, double rate, double sigma,
                             HurstParameter hurst, double t, double maturity);

// rate_integral is r_tilde(T) - r_tilde(t) = int_t^T r_s ds, passed directly
// so any deterministic rate curve can be used.
OptionQuote call_price_tv(double spot, double strike, double rate_integral,
                          const VolatilitySpec& vol, HurstParameter hurst, double t,
                          double maturity, const QuadratureConfig& quad = {});

struct PriceInterval {
  OptionQuote low;
  OptionQuote high;
  bool clipped_at_zero = false;  // v_low < 0 was clipped to 0
};

// Maps a total-variance interval to a price interval (monotonicity in v).
PriceInterval price_interval(double spot, double strike, double rate_integral,
                             double variance_low, double variance_high);

}  // namespace fbmlab
