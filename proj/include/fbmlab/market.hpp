#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "fbmlab/fgn.hpp"
#include "fbmlab/fractional_calculus.hpp"
#include "fbmlab/types.hpp"
#include "fbmlab/volatility.hpp"

namespace fbmlab {

// Exact simulation of the exponential price process
//   log S_t = log S_0 + (Gaussian part) + drift - theta(t) / 2
// for constant and time-varying deterministic volatility.

struct PricePath {
  VectorXd times;       // n+1
  VectorXd prices;      // n+1, prices[0] == s0 exactly
  VectorXd log_prices;  // primary representation; prices = exp(log_prices)
  VectorXd shocks;      // n Gaussian log-price increments (sigma dB^H or eta_k)
  double s0 = 1.0;
  HurstParameter hurst;
  std::optional<VolatilitySpec> vol;  // absent for the degenerate sigma = 0 path
  double drift = 0.0;
  std::uint64_t seed = 0;
};

// log S_{t_k} = log s0 + sigma B^H_{t_k} + mu t_k - sigma^2 t_k^{2H} / 2.
// Uses the circulant sampler (with its Cholesky fallback); deterministic
// given the seed.
PricePath simulate_const(double s0, double sigma, HurstParameter hurst,
                         const UniformGrid& grid, std::uint64_t seed, double mu = 0.0);
// replication-loop variant sharing one prepared sampler
PricePath simulate_const(double s0, double sigma, const FgnCirculantSampler& sampler,
                         std::uint64_t seed, double mu = 0.0);

// Covariance of the cell Wiener integrals eta_k = int sigma chi_[t_k,t_{k+1}] dB^H;
// entry (k, j) is the window inner product <f_k, f_j>.
MatrixXd eta_covariance(const VolatilitySpec& vol, const UniformGrid& grid,
                        HurstParameter hurst, const QuadratureConfig& quad = {});

// Prepared joint law of the eta vector: Gram matrix, its Cholesky factor and
// the anchored energies theta(t_k).  Immutable after construction; shared
// freely across concurrent replications.
struct EtaModel {
  UniformGrid grid;
  HurstParameter hurst;
  VolatilitySpec vol;
  std::shared_ptr<const MatrixXd> gram;
  MatrixXd chol_lower;
  VectorXd theta_partials;  // n+1, anchored at zero
};

EtaModel build_eta_model(const VolatilitySpec& vol, const UniformGrid& grid,
                         HurstParameter hurst, const QuadratureConfig& quad = {});

struct EtaVector {
  VectorXd values;
  std::shared_ptr<const MatrixXd> gram;
  std::uint64_t seed = 0;
};

// exact joint Gaussian draw with covariance model.gram
EtaVector sample_eta(const EtaModel& model, std::uint64_t seed);

// log S_{t_m} = log s0 + sum_{k<m} eta_k - theta(t_m) / 2, drift fixed at zero.
// The eta vector is drawn exactly from its Gram factor, not approximated
// against a simulated fBm path, so estimator experiments see no path
// discretization error.
PricePath simulate_tv(double s0, const EtaModel& model, std::uint64_t seed);
PricePath simulate_tv(double s0, const VolatilitySpec& vol, HurstParameter hurst,
                      const UniformGrid& grid, std::uint64_t seed,
                      const QuadratureConfig& quad = {});

}  // namespace fbmlab
