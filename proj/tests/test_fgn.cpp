#include <doctest.h>

#include <cmath>

#include "fbmlab/fgn.hpp"
#include "fbmlab/rng.hpp"
#include "fbmlab/stats.hpp"

using namespace fbmlab;

TEST_CASE("fbm covariance closed form") {
  CHECK(fbm_covariance(1.0, 1.0, HurstParameter(0.7)) == doctest::Approx(1.0));
  CHECK(fbm_covariance(1.0, 2.0, HurstParameter(0.5)) == doctest::Approx(1.0));
  // 0.5 (1 + 2^{1.5} - 1) = sqrt(2), evaluated independently
  CHECK(fbm_covariance(1.0, 2.0, HurstParameter(0.75)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  for (double h : {0.3, 0.55, 0.9}) {
    const HurstParameter hurst(h);
    CHECK(fbm_covariance(0.7, 1.9, hurst) ==
          doctest::Approx(fbm_covariance(1.9, 0.7, hurst)).epsilon(1e-15));
    CHECK(fbm_covariance(1.3, 1.3, hurst) ==
          doctest::Approx(std::pow(1.3, 2.0 * h)).epsilon(1e-14));
    CHECK(fbm_covariance(0.0, 2.0, hurst) == 0.0);
  }
  CHECK_THROWS_AS(fbm_covariance(-0.1, 1.0, HurstParameter(0.6)), config_error);
}

TEST_CASE("fgn autocovariance") {
  CHECK(fgn_autocovariance(1, HurstParameter(0.5), 1.0) == doctest::Approx(0.0));
  CHECK(fgn_autocovariance(0, HurstParameter(0.65), 0.001) ==
        doctest::Approx(std::pow(0.001, 1.3)).epsilon(1e-14));
  // 0.5 (2^{1.5} - 2)
  CHECK(fgn_autocovariance(1, HurstParameter(0.75), 1.0) ==
        doctest::Approx(0.5 * (std::pow(2.0, 1.5) - 2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(fgn_autocovariance(-1, HurstParameter(0.6), 1.0), config_error);

  // sign of the long/short memory correlations
  for (Index k = 1; k <= 50; ++k) {
    CHECK(fgn_autocovariance(k, HurstParameter(0.7), 0.01) > 0.0);
    CHECK(fgn_autocovariance(k, HurstParameter(0.3), 0.01) < 0.0);
    CHECK(fgn_autocovariance(k, HurstParameter(0.5), 0.01) == doctest::Approx(0.0));
  }
}

TEST_CASE("toeplitz covariance is positive definite across H and n") {
  for (double h : {0.05, 0.2, 0.4, 0.5, 0.6, 0.75, 0.9, 0.95}) {
    for (Index n : {1, 2, 16, 64, 512}) {
      CHECK_NOTHROW(FgnCholeskySampler(UniformGrid(n), HurstParameter(h)));
    }
  }
}

TEST_CASE("cumulate") {
  const UniformGrid grid(3);
  const HurstParameter hurst(0.6);

  FgnIncrements zero{VectorXd::Zero(3), hurst, grid, 0};
  CHECK(cumulate(zero).values.isZero(0.0));

  FgnIncrements updown{VectorXd{{1.0, -1.0}}, hurst, UniformGrid(2), 0};
  const FbmPath path = cumulate(updown);
  CHECK(path.values[0] == 0.0);
  CHECK(path.values[1] == 1.0);
  CHECK(path.values[2] == 0.0);

  // round trip is exact in both directions
  const FgnIncrements random = sample_fgn_circulant(UniformGrid(257), hurst, 11);
  const FbmPath p = cumulate(random);
  CHECK(increments_of(p) == random.values);
  const FbmPath again = cumulate(FgnIncrements{increments_of(p), hurst, p.grid, p.seed});
  CHECK(again.values == p.values);
  CHECK(p.values[0] == 0.0);
}

TEST_CASE("samplers are deterministic in the seed") {
  const UniformGrid grid(64);
  const HurstParameter hurst(0.72);
  const FgnCirculantSampler circulant(grid, hurst);
  CHECK(circulant.sample(5).values == circulant.sample(5).values);
  CHECK(circulant.sample(5).values != circulant.sample(6).values);
  CHECK_FALSE(circulant.uses_fallback());

  const FgnCholeskySampler cholesky(grid, hurst);
  CHECK(cholesky.sample(5).values == cholesky.sample(5).values);
}

TEST_CASE("empirical covariance matches the toeplitz target" * doctest::timeout(300)) {
  const Index n = 64;
  const Index reps = 20'000;
  const HurstParameter hurst(0.7);
  const UniformGrid grid(n);
  const FgnCirculantSampler sampler(grid, hurst);

  MatrixXd second_moment = MatrixXd::Zero(n, n);
  for (Index rep = 0; rep < reps; ++rep) {
    const VectorXd x = sampler.sample(derive_stream(400, rep)).values;
    second_moment.selfadjointView<Eigen::Lower>().rankUpdate(x, 1.0);
  }
  second_moment /= static_cast<double>(reps);
  const MatrixXd target = fgn_covariance_matrix(grid, hurst);

  // entrywise 4 standard errors of the covariance estimator
  Index violations = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) {
      const double se = std::sqrt(
          (target(i, i) * target(j, j) + target(i, j) * target(i, j)) / reps);
      if (std::abs(second_moment(i, j) - target(i, j)) > 4.0 * se) ++violations;
    }
  CHECK(violations == 0);
}

TEST_CASE("cholesky and circulant samplers agree in distribution" * doctest::timeout(300)) {
  const Index n = 64;
  const Index reps = 10'000;
  const UniformGrid grid(n);
  const HurstParameter hurst(0.75);
  const FgnCirculantSampler circulant(grid, hurst);
  const FgnCholeskySampler cholesky(grid, hurst);

  VectorXd end_a(reps), end_b(reps);
  for (Index rep = 0; rep < reps; ++rep) {
    end_a[rep] = circulant.sample(derive_stream(52, 0, rep)).values.sum();  // B^H_1
    end_b[rep] = cholesky.sample(derive_stream(52, 1, rep)).values.sum();
  }
  const KsResult ks = ks_test_two_sample(end_a, end_b);
  CHECK(ks.p_value > 0.01);

  // both should match the exact law Var(B^H_1) = 1
  CHECK(variance(end_a) == doctest::Approx(1.0).epsilon(0.06));
  CHECK(variance(end_b) == doctest::Approx(1.0).epsilon(0.06));
}

TEST_CASE("increment variance is step^{2H} across seeds") {
  const UniformGrid grid(16);
  const HurstParameter hurst(0.62);
  const FgnCirculantSampler sampler(grid, hurst);
  VectorXd firsts(8000);
  for (Index rep = 0; rep < firsts.size(); ++rep)
    firsts[rep] = sampler.sample(derive_stream(9, rep)).values[3];
  const double target = std::pow(grid.step(), hurst.two_h());
  CHECK(variance(firsts) == doctest::Approx(target).epsilon(0.07));
}
