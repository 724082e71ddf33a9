#include "fbmlab/fgn.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Cholesky>
#include <unsupported/Eigen/FFT>

#include "fbmlab/rng.hpp"

namespace fbmlab {

MatrixXd fgn_covariance_matrix(const UniformGrid& grid, HurstParameter hurst) {
  const Index n = grid.n;
  VectorXd rho(n);
  for (Index k = 0; k < n; ++k) rho[k] = fgn_autocovariance(k, hurst, grid.step());
  MatrixXd cov(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) cov(i, j) = rho[std::abs(i - j)];
  return cov;
}

namespace {

// Locates the first non-positive pivot for the error message; only runs on
// the (rare) factorization failure path.
Index failing_pivot(const MatrixXd& cov) {
  const Index n = cov.rows();
  MatrixXd a = cov;
  for (Index k = 0; k < n; ++k) {
    if (!(a(k, k) > 0.0)) return k;
    const double d = std::sqrt(a(k, k));
    for (Index i = k + 1; i < n; ++i) {
      const double l = a(i, k) / d;
      for (Index j = k + 1; j <= i; ++j) a(i, j) -= l * a(j, k) / d;
    }
  }
  return n - 1;
}

}  // namespace

FgnCholeskySampler::FgnCholeskySampler(const UniformGrid& grid, HurstParameter hurst)
    : grid_(grid), hurst_(hurst) {
  const MatrixXd cov = fgn_covariance_matrix(grid, hurst);
  Eigen::LLT<MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw numerical_error("fgn: covariance Cholesky failed at pivot " +
                          std::to_string(failing_pivot(cov)) + " (n=" + std::to_string(grid.n) +
                          ", H=" + std::to_string(hurst.value()) + ")");
  chol_lower_ = llt.matrixL();
}

FgnIncrements FgnCholeskySampler::sample(std::uint64_t seed) const {
  auto stream = make_stream(seed);
  VectorXd z(grid_.n);
  for (Index i = 0; i < grid_.n; ++i) z[i] = stream.next_normal();
  return {chol_lower_ * z, hurst_, grid_, seed, false};
}

FgnCirculantSampler::FgnCirculantSampler(const UniformGrid& grid, HurstParameter hurst)
    : grid_(grid), hurst_(hurst) {
  const Index n = grid.n;
  const Index m = 2 * n;
  // first row of the circulant embedding: rho(0..n), then mirrored
  std::vector<std::complex<double>> row(m);
  for (Index k = 0; k <= n; ++k) row[k] = fgn_autocovariance(k, hurst, grid.step());
  for (Index k = 1; k < n; ++k) row[m - k] = row[k];

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> lambda(m);
  fft.fwd(lambda, row);

  double max_eig = 0.0, min_eig = 0.0;
  for (const auto& l : lambda) {
    max_eig = std::max(max_eig, l.real());
    min_eig = std::min(min_eig, l.real());
  }
  if (min_eig < -1e-10 * max_eig) {
    fallback_ = std::make_shared<FgnCholeskySampler>(grid, hurst);
    return;
  }
  scale_.resize(m);
  for (Index k = 0; k < m; ++k)
    scale_[k] = std::sqrt(std::max(lambda[k].real(), 0.0) / static_cast<double>(m));
}

FgnIncrements FgnCirculantSampler::sample(std::uint64_t seed) const {
  if (fallback_) {
    FgnIncrements out = fallback_->sample(seed);
    out.cholesky_fallback = true;
    return out;
  }
  const Index n = grid_.n;
  const Index m = 2 * n;
  auto stream = make_stream(seed);

  // Hermitian spectrum with independent weights per frequency; frequencies 0
  // and m/2 are real, the rest come in conjugate pairs.
  std::vector<std::complex<double>> w(m);
  w[0] = scale_[0] * stream.next_normal();
  for (Index k = 1; k < n; ++k) {
    const double re = stream.next_normal();
    const double im = stream.next_normal();
    const double a = scale_[k] / std::sqrt(2.0);
    w[k] = {a * re, a * im};
    w[m - k] = std::conj(w[k]);
  }
  w[n] = scale_[n] * stream.next_normal();

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> x(m);
  fft.inv(x, w);  // includes the 1/m factor; undo it, the weights carry 1/sqrt(m)
  VectorXd values(n);
  for (Index k = 0; k < n; ++k) values[k] = x[k].real() * static_cast<double>(m);
  return {std::move(values), hurst_, grid_, seed, false};
}

FgnIncrements sample_fgn_cholesky(const UniformGrid& grid, HurstParameter hurst,
                                  std::uint64_t seed) {
  return FgnCholeskySampler(grid, hurst).sample(seed);
}

FgnIncrements sample_fgn_circulant(const UniformGrid& grid, HurstParameter hurst,
                                   std::uint64_t seed) {
  return FgnCirculantSampler(grid, hurst).sample(seed);
}

FbmPath cumulate(const FgnIncrements& increments) {
  const Index n = increments.values.size();
  VectorXd path(n + 1);
  path[0] = 0.0;
  for (Index k = 0; k < n; ++k) path[k + 1] = path[k] + increments.values[k];
  return {std::move(path), increments.values, increments.hurst, increments.grid,
          increments.seed};
}

}  // namespace fbmlab
