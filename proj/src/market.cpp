#include "fbmlab/market.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "fbmlab/rng.hpp"

namespace fbmlab {

namespace {

PricePath assemble_path(const UniformGrid& grid, double s0, VectorXd shocks,
                        const VectorXd& deterministic_exponent, HurstParameter hurst,
                        std::optional<VolatilitySpec> vol, double drift,
                        std::uint64_t seed) {
  if (!(s0 > 0.0)) throw config_error("market: initial price must be > 0");
  const Index n = grid.n;
  PricePath path{.times = grid.points(),
                 .prices = VectorXd(n + 1),
                 .log_prices = VectorXd(n + 1),
                 .shocks = std::move(shocks),
                 .s0 = s0,
                 .hurst = hurst,
                 .vol = std::move(vol),
                 .drift = drift,
                 .seed = seed};
  const double log_s0 = std::log(s0);
  path.log_prices[0] = log_s0;
  path.prices[0] = s0;
  double cum = 0.0;
  for (Index k = 1; k <= n; ++k) {
    cum += path.shocks[k - 1];
    path.log_prices[k] = log_s0 + cum + deterministic_exponent[k];
    path.prices[k] = std::exp(path.log_prices[k]);
  }
  return path;
}

}  // namespace

PricePath simulate_const(double s0, double sigma, const FgnCirculantSampler& sampler,
                         std::uint64_t seed, double mu) {
  if (sigma < 0.0) throw config_error("market: sigma must be >= 0");
  const UniformGrid& grid = sampler.grid();
  const HurstParameter hurst = sampler.hurst();
  const FgnIncrements fgn = sampler.sample(seed);

  VectorXd exponent(grid.n + 1);
  for (Index k = 0; k <= grid.n; ++k) {
    const double t = grid.point(k);
    exponent[k] = mu * t - 0.5 * sigma * sigma * std::pow(t, hurst.two_h());
  }
  std::optional<VolatilitySpec> vol;
  if (sigma > 0.0) vol = VolatilitySpec::constant(sigma);
  return assemble_path(grid, s0, sigma * fgn.values, exponent, hurst, std::move(vol), mu,
                       seed);
}

PricePath simulate_const(double s0, double sigma, HurstParameter hurst,
                         const UniformGrid& grid, std::uint64_t seed, double mu) {
  return simulate_const(s0, sigma, FgnCirculantSampler(grid, hurst), seed, mu);
}

MatrixXd eta_covariance(const VolatilitySpec& vol, const UniformGrid& grid,
                        HurstParameter hurst, const QuadratureConfig& quad) {
  return window_gram(vol, grid, hurst, quad);
}

EtaModel build_eta_model(const VolatilitySpec& vol, const UniformGrid& grid,
                         HurstParameter hurst, const QuadratureConfig& quad) {
  hurst.require_long_memory("market");
  const ThetaReport report = theta_report(vol, grid, hurst, quad);
  auto gram = std::make_shared<MatrixXd>(window_gram(vol, grid, hurst, quad));
  Eigen::LLT<MatrixXd> llt(*gram);
  if (llt.info() != Eigen::Success)
    throw numerical_error("market: eta Gram factorization failed (n=" +
                          std::to_string(grid.n) + ", H=" + std::to_string(hurst.value()) +
                          ")");
  VectorXd partials(grid.n + 1);
  partials[0] = 0.0;
  double acc = 0.0;
  for (Index k = 0; k < grid.n; ++k) {
    acc += report.deltas[k];
    partials[k + 1] = acc;
  }
  return EtaModel{grid, hurst, vol, std::move(gram), llt.matrixL(), std::move(partials)};
}

EtaVector sample_eta(const EtaModel& model, std::uint64_t seed) {
  auto stream = make_stream(seed);
  VectorXd z(model.grid.n);
  for (Index i = 0; i < model.grid.n; ++i) z[i] = stream.next_normal();
  return {model.chol_lower * z, model.gram, seed};
}

PricePath simulate_tv(double s0, const EtaModel& model, std::uint64_t seed) {
  EtaVector eta = sample_eta(model, seed);
  VectorXd exponent = -0.5 * model.theta_partials;
  return assemble_path(model.grid, s0, std::move(eta.values), exponent, model.hurst,
                       model.vol, 0.0, seed);
}

PricePath simulate_tv(double s0, const VolatilitySpec& vol, HurstParameter hurst,
                      const UniformGrid& grid, std::uint64_t seed,
                      const QuadratureConfig& quad) {
  return simulate_tv(s0, build_eta_model(vol, grid, hurst, quad), seed);
}

}  // namespace fbmlab
