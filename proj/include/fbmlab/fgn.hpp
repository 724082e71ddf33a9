#pragma once

#include <cstdint>
#include <memory>

#include "fbmlab/types.hpp"

namespace fbmlab {

// Exact sampling and covariance computation for fractional Brownian motion
// (fBm) and fractional Gaussian noise (fGn) on a uniform grid.
//
// Covariance of fBm: E[B^H_s B^H_t] = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2.
// Increments over step h are stationary with autocovariance
//   rho(k) = h^{2H} [ (k+1)^{2H} + |k-1|^{2H} - 2 k^{2H} ] / 2,
// positive for all lags k >= 1 when H > 1/2, negative when H < 1/2, and zero
// in the Brownian case H = 1/2.

template <class Scalar = double>
Scalar fbm_covariance(Scalar s, Scalar t, HurstParameter hurst) {
  if (s < Scalar(0) || t < Scalar(0))
    throw config_error("fgn: fbm_covariance needs non-negative times");
  const Scalar two_h = Scalar(hurst.two_h());
  using std::abs;
  using std::pow;
  return (pow(t, two_h) + pow(s, two_h) - pow(abs(t - s), two_h)) / Scalar(2);
}

template <class Scalar = double>
Scalar fgn_autocovariance(Index lag, HurstParameter hurst, Scalar step) {
  if (lag < 0) throw config_error("fgn: autocovariance lag must be >= 0");
  const Scalar two_h = Scalar(hurst.two_h());
  const Scalar k = Scalar(lag);
  using std::abs;
  using std::pow;
  return Scalar(0.5) * pow(step, two_h) *
         (pow(k + 1, two_h) + pow(abs(k - 1), two_h) - Scalar(2) * pow(k, two_h));
}

// Dense Toeplitz covariance of the n fGn increments on the grid.
MatrixXd fgn_covariance_matrix(const UniformGrid& grid, HurstParameter hurst);

struct FgnIncrements {
  VectorXd values;  // B^H_{t_{k+1}} - B^H_{t_k}, k = 0..n-1
  HurstParameter hurst;
  UniformGrid grid;
  std::uint64_t seed = 0;
  bool cholesky_fallback = false;  // circulant embedding was not usable
};

struct FbmPath {
  VectorXd values;      // n+1 points, values[0] == 0
  VectorXd increments;  // the generating increments, kept so the round trip is exact
  HurstParameter hurst;
  UniformGrid grid;
  std::uint64_t seed = 0;
};

// Reference sampler: dense Cholesky factor of the Toeplitz covariance.
// The factor is immutable after construction and shareable across threads;
// sample() is pure given the seed.
class FgnCholeskySampler {
 public:
  FgnCholeskySampler(const UniformGrid& grid, HurstParameter hurst);
  FgnIncrements sample(std::uint64_t seed) const;

  const UniformGrid& grid() const { return grid_; }
  HurstParameter hurst() const { return hurst_; }

 private:
  UniformGrid grid_;
  HurstParameter hurst_;
  MatrixXd chol_lower_;
};

// Fast path: circulant embedding of the Toeplitz covariance, O(n log n) per
// sample.  If an embedding eigenvalue is negative beyond
// 1e-10 * max(eigenvalue), sampling falls back to the Cholesky route and the
// result is flagged.
class FgnCirculantSampler {
 public:
  FgnCirculantSampler(const UniformGrid& grid, HurstParameter hurst);
  FgnIncrements sample(std::uint64_t seed) const;

  bool uses_fallback() const { return fallback_ != nullptr; }
  const UniformGrid& grid() const { return grid_; }
  HurstParameter hurst() const { return hurst_; }

 private:
  UniformGrid grid_;
  HurstParameter hurst_;
  VectorXd scale_;  // sqrt(lambda_k / m) spectral weights
  std::shared_ptr<const FgnCholeskySampler> fallback_;
};

FgnIncrements sample_fgn_cholesky(const UniformGrid& grid, HurstParameter hurst,
                                  std::uint64_t seed);
FgnIncrements sample_fgn_circulant(const UniformGrid& grid, HurstParameter hurst,
                                   std::uint64_t seed);

// Prefix sums with a leading zero.  The increments are retained in the result
// so that cumulate and increment extraction invert each other exactly.
FbmPath cumulate(const FgnIncrements& increments);

inline VectorXd increments_of(const FbmPath& path) { return path.increments; }

}  // namespace fbmlab
