#include <doctest.h>

#include <cmath>

#include <Eigen/Cholesky>

#include "fbmlab/fgn.hpp"
#include "fbmlab/fractional_calculus.hpp"
#include "fbmlab/rng.hpp"

using namespace fbmlab;

namespace {

// Independent oracle for anchored windows of power volatilities:
//   <s^a, s^b> over [0,t]^2 = H(2H-1) [B(a+1, 2H-1) + B(b+1, 2H-1)]
//                             * t^{a+b+2H} / (a + b + 2H)
// with the Beta function evaluated through lgamma.
double beta_fn(double x, double y) {
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

double anchored_pair(double a, double b, double h, double t) {
  const double g = 2.0 * h - 1.0;
  return h * g * (beta_fn(a + 1.0, g) + beta_fn(b + 1.0, g)) *
         std::pow(t, a + b + 2.0 * h) / (a + b + 2.0 * h);
}

double theta_oracle_power_law(double sigma, double alpha, double h, double t) {
  return sigma * sigma * anchored_pair(alpha, alpha, h, t);
}

double theta_oracle_power_sum(double sigma, double alpha, double beta, double h, double t) {
  return sigma * sigma *
         (anchored_pair(alpha, alpha, h, t) + 2.0 * anchored_pair(alpha, beta, h, t) +
          anchored_pair(beta, beta, h, t));
}

const VolatilitySpec kPl = VolatilitySpec::power_law(0.4, 0.3);
const VolatilitySpec kPs = VolatilitySpec::power_sum(0.4, 0.8, 2.0);

}  // namespace

TEST_CASE("kernel constant c_h") {
  CHECK_THROWS_AS(c_h(HurstParameter(0.5)), identity_regime_error);
  // golden values from a 50-digit evaluation of the gamma/trig formula
  CHECK(c_h(HurstParameter(0.75)) ==
        doctest::Approx(0.14472187625540384).epsilon(1e-12));
  CHECK(c_h(HurstParameter(0.51)) ==
        doctest::Approx(0.0050495386555843206).epsilon(1e-12));
  CHECK(c_h(HurstParameter(0.99)) ==
        doctest::Approx(0.095636183439569995).epsilon(1e-12));
  // vanishes toward both ends of the long-memory range, positive inside
  for (double h : {0.55, 0.6, 0.7, 0.8, 0.9}) CHECK(c_h(HurstParameter(h)) > 0.0);
}

TEST_CASE("h_inner on indicator windows") {
  const VolatilitySpec unit = VolatilitySpec::constant(1.0);
  for (double h : {0.55, 0.65, 0.74, 0.9}) {
    const HurstParameter hurst(h);
    for (double t : {0.3, 1.0, 1.7}) {
      CHECK(h_inner(unit, {0.0, t}, unit, {0.0, t}, hurst) ==
            doctest::Approx(std::pow(t, 2.0 * h)).epsilon(1e-13));
    }
    // cross window against the fBm covariance (shared closed form)
    auto stream = make_stream(123);
    for (int i = 0; i < 20; ++i) {
      const double s = 2.0 * stream.next_uniform();
      const double t = 2.0 * stream.next_uniform();
      CHECK(h_inner(unit, {0.0, s}, unit, {0.0, t}, hurst) ==
            doctest::Approx(fbm_covariance(s, t, hurst)).epsilon(1e-8));
    }
  }
  const VolatilitySpec c2 = VolatilitySpec::constant(0.7);
  CHECK(h_inner(c2, {0.0, 1.0}, c2, {0.0, 1.0}, HurstParameter(0.6)) ==
        doctest::Approx(0.49).epsilon(1e-13));

  CHECK_THROWS_AS(
      h_inner(c2, {0.0, 1.0}, c2, {0.0, 1.0}, HurstParameter(0.5)), config_error);
  CHECK_THROWS_AS(
      h_inner(c2, {0.0, 1.0}, c2, {0.0, 1.0}, HurstParameter(0.3)), config_error);
}

TEST_CASE("theta_total closed forms and quadrature accuracy") {
  const HurstParameter h55(0.55);
  SUBCASE("constant sigma is exact") {
    const VolatilitySpec vol = VolatilitySpec::constant(0.63);
    for (double t : {0.2, 0.9, 1.0})
      CHECK(theta_total(vol, t, h55) ==
            doctest::Approx(0.63 * 0.63 * std::pow(t, 1.1)).epsilon(1e-13));
    CHECK(theta_total(vol, 0.0, h55) == 0.0);
  }
  SUBCASE("power-law window against the Beta oracle") {
    CHECK(theta_total(kPl, 1.0, h55) ==
          doctest::Approx(theta_oracle_power_law(0.4, 0.3, 0.55, 1.0)).epsilon(3e-7));
    CHECK(theta_total(kPl, 1.0, HurstParameter(0.65)) ==
          doctest::Approx(theta_oracle_power_law(0.4, 0.3, 0.65, 1.0)).epsilon(3e-7));
    CHECK(theta_total(kPl, 0.37, HurstParameter(0.62)) ==
          doctest::Approx(theta_oracle_power_law(0.4, 0.3, 0.62, 0.37)).epsilon(3e-7));
    // frozen high-precision value for the H = 0.55 unit window
    CHECK(theta_total(kPl, 1.0, h55) ==
          doctest::Approx(0.099625823929083).epsilon(3e-7));
  }
  SUBCASE("power-sum window against the Beta oracle") {
    CHECK(theta_total(kPs, 1.0, h55) ==
          doctest::Approx(theta_oracle_power_sum(0.4, 0.8, 2.0, 0.55, 1.0)).epsilon(3e-7));
    CHECK(theta_total(kPs, 1.0, h55) == doctest::Approx(0.170582132104452).epsilon(3e-7));
  }
  SUBCASE("tabulated is exact") {
    const UniformGrid tg(4);
    const VolatilitySpec tab =
        VolatilitySpec::tabulated(tg, VectorXd{{0.2, 0.5, 0.3, 0.7}});
    // value from an independent evaluation of the psi double differences
    CHECK(theta_total(tab, 1.0, HurstParameter(0.65)) ==
          doctest::Approx(0.199468280963228).epsilon(1e-12));
    // no quadrature: resolution changes nothing
    QuadratureConfig fine;
    fine.mesh_cells = 8192;
    CHECK(theta_total(tab, 1.0, HurstParameter(0.65), fine) ==
          theta_total(tab, 1.0, HurstParameter(0.65)));
  }
  SUBCASE("doubling the mesh moves theta_total by less than 1e-7 relative") {
    QuadratureConfig base, doubled;
    doubled.mesh_cells = 2 * base.mesh_cells;
    for (double h : {0.55, 0.65, 0.74}) {
      const HurstParameter hurst(h);
      const double a = theta_total(kPl, 1.0, hurst, base);
      const double b = theta_total(kPl, 1.0, hurst, doubled);
      CHECK(std::abs(b - a) / a < 1e-7);
      const double c = theta_total(kPs, 1.0, hurst, base);
      const double d = theta_total(kPs, 1.0, hurst, doubled);
      CHECK(std::abs(d - c) / c < 1e-7);
    }
  }
  SUBCASE("quadratic scaling in sigma") {
    for (const auto* vol : {&kPl, &kPs}) {
      const double base = theta_total(*vol, 1.0, h55);
      CHECK(theta_total(vol->scaled(2.0), 1.0, h55) ==
            doctest::Approx(4.0 * base).epsilon(1e-12));
      CHECK(theta_total(vol->scaled(1.7), 1.0, h55) ==
            doctest::Approx(1.7 * 1.7 * base).epsilon(1e-12));
    }
    // 16x sigma = 256x theta, the internal consistency of the reference tables
    const double big = theta_total(kPl.scaled(16.0), 1.0, h55);
    const double small = theta_total(kPl, 1.0, h55);
    CHECK(big / small == doctest::Approx(256.0).epsilon(1e-12));
    CHECK(big == doctest::Approx(25.50445).epsilon(5e-5));  // 4 significant figures
  }
  SUBCASE("monotone in t") {
    double prev = 0.0;
    for (double t = 0.1; t <= 1.01; t += 0.1) {
      const double v = theta_total(kPs, t, h55);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("theta_cell") {
  const HurstParameter h55(0.55);
  SUBCASE("constant sigma, any cell") {
    const VolatilitySpec vol = VolatilitySpec::constant(0.8);
    const UniformGrid grid(10);
    for (Index k : {0, 3, 9})
      CHECK(theta_cell(vol, k, grid, h55) ==
            doctest::Approx(0.64 * std::pow(10.0, -1.1)).epsilon(1e-13));
    CHECK_THROWS_AS(theta_cell(vol, 10, grid, h55), config_error);
    CHECK_THROWS_AS(theta_cell(vol, -1, grid, h55), config_error);
  }
  SUBCASE("cell energies against independent quadrature goldens") {
    // adaptive-quadrature references for pow:0.4,0.3 cells of an N=1000 grid
    const UniformGrid grid(1000);
    struct Golden { double h; Index k; double value; };
    const Golden goldens[] = {
        {0.55, 1, 1.613264016773e-06}, {0.55, 5, 3.533351455336e-06},
        {0.55, 500, 5.293737638767e-05}, {0.55, 999, 8.016589714560e-05},
        {0.74, 1, 1.167282825383e-07}, {0.74, 5, 2.559462716073e-07},
        {0.74, 500, 3.834973868281e-06}, {0.74, 999, 5.807505851037e-06},
    };
    QuadratureConfig fine;
    fine.mesh_cells = 64'000;  // 64 subcells per cell
    for (const auto& g : goldens)
      CHECK(theta_cell(kPl, g.k, grid, HurstParameter(g.h), fine) ==
            doctest::Approx(g.value).epsilon(2e-5));
  }
  SUBCASE("cell energies never exceed the total for a positive kernel") {
    const UniformGrid grid(64);
    for (const auto* vol : {&kPl, &kPs}) {
      double sum = 0.0;
      for (Index k = 0; k < grid.n; ++k) sum += theta_cell(*vol, k, grid, h55);
      CHECK(sum <= theta_total(*vol, 1.0, h55) * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("tilde_theta") {
  SUBCASE("constant sigma gives sigma^2 for every N") {
    const VolatilitySpec vol = VolatilitySpec::constant(1.3);
    for (Index n : {16, 250, 1000})
      CHECK(tilde_theta(vol, UniformGrid(n), HurstParameter(0.6)) ==
            doctest::Approx(1.69).epsilon(1e-12));
  }
  SUBCASE("reference table values at N=1000") {
    const UniformGrid grid(1000);
    // power-sum family: 0.1777476 published, 4 significant figures
    CHECK(tilde_theta(kPs, grid, HurstParameter(0.55)) ==
          doctest::Approx(0.1777476).epsilon(5e-5));
    // converged value from the high-resolution mesh oracle
    CHECK(tilde_theta(kPs, grid, HurstParameter(0.55)) ==
          doctest::Approx(0.177748980).epsilon(3e-7));
  }
  SUBCASE("large N approaches the integral of sigma^2") {
    // independent oracle: int_0^1 0.16 s^{0.6} ds = 0.16 / 1.6 = 0.1
    CHECK(tilde_theta(kPl, UniformGrid(4000), HurstParameter(0.65)) ==
          doctest::Approx(0.1).epsilon(1e-5));
  }
}

TEST_CASE("delta_cell") {
  const HurstParameter h6(0.6);
  SUBCASE("constant sigma closed form") {
    const VolatilitySpec vol = VolatilitySpec::constant(0.9);
    const UniformGrid grid(8);
    for (Index k : {0, 2, 7}) {
      const double expect = 0.81 *
                            (std::pow(k + 1.0, 1.2) - std::pow(static_cast<double>(k), 1.2)) *
                            std::pow(8.0, -1.2);
      CHECK(delta_cell(vol, k, grid, h6) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  SUBCASE("telescoping and the cell bound") {
    const UniformGrid grid(64);
    for (const auto* vol : {&kPl, &kPs}) {
      const ThetaReport report = theta_report(*vol, grid, h6);
      CHECK(report.deltas.sum() ==
            doctest::Approx(report.theta_total).epsilon(1e-12));
      const double bound_sigma = vol->bound(1.0);
      for (Index k = 0; k < grid.n; ++k) {
        const double cap = bound_sigma * bound_sigma * std::pow(64.0, -1.2) *
                           (std::pow(k + 1.0, 1.2) - std::pow(static_cast<double>(k), 1.2));
        CHECK(std::abs(report.deltas[k]) <= cap * (1.0 + 1e-9));
      }
    }
  }
}

TEST_CASE("theta_report invariants") {
  const UniformGrid grid(128);
  const HurstParameter hurst(0.65);
  const ThetaReport report = theta_report(kPl, grid, hurst);
  CHECK(report.n == 128);
  CHECK(report.hurst == 0.65);
  CHECK(report.theta_total > 0.0);
  CHECK(report.theta_cells.size() == 128);
  CHECK(report.deltas.size() == 128);
  CHECK(report.theta_cells.allFinite());
  CHECK(report.deltas.allFinite());
  CHECK((report.theta_cells.array() > 0.0).all());
  CHECK(report.deltas.sum() == doctest::Approx(report.theta_total).epsilon(1e-10));
  // consistent with the standalone operations on the same grid
  CHECK(report.tilde_theta ==
        doctest::Approx(tilde_theta(kPl, grid, hurst)).epsilon(1e-14));
  CHECK(report.theta_total == doctest::Approx(theta_total(kPl, 1.0, hurst)).epsilon(1e-6));
}

TEST_CASE("tabulated windows away from the origin") {
  // a flat table behaves exactly like a constant volatility on any window
  const HurstParameter hurst(0.6);
  const VolatilitySpec flat =
      VolatilitySpec::tabulated(UniformGrid(5), VectorXd::Constant(5, 0.7));
  const VolatilitySpec constant = VolatilitySpec::constant(0.7);
  for (const Window w : {Window{0.13, 0.31}, Window{0.4, 1.0}, Window{0.0, 0.77}}) {
    CHECK(h_inner(flat, w, flat, w, hurst) ==
          doctest::Approx(h_inner(constant, w, constant, w, hurst)).epsilon(1e-12));
  }
  // cross windows with distinct breakpoint sets
  const VolatilitySpec steps =
      VolatilitySpec::tabulated(UniformGrid(4), VectorXd{{0.2, 0.5, 0.3, 0.7}});
  const double cross =
      h_inner(steps, {0.1, 0.6}, steps, {0.5, 0.9}, hurst);
  CHECK(cross > 0.0);
  CHECK(cross == doctest::Approx(h_inner(steps, {0.5, 0.9}, steps, {0.1, 0.6}, hurst))
                     .epsilon(1e-13));
  // bilinearity across a split of the first window
  const double left = h_inner(steps, {0.1, 0.35}, steps, {0.5, 0.9}, hurst);
  const double right = h_inner(steps, {0.35, 0.6}, steps, {0.5, 0.9}, hurst);
  CHECK(left + right == doctest::Approx(cross).epsilon(1e-12));
}

TEST_CASE("window gram matrices are positive semi-definite") {
  const UniformGrid grid(48);
  const UniformGrid tg(12);
  const VolatilitySpec tab = VolatilitySpec::tabulated(
      tg, VectorXd::LinSpaced(12, 0.1, 0.9));
  const VolatilitySpec specs[] = {VolatilitySpec::constant(0.5), kPl, kPs, tab};
  for (const auto& vol : specs) {
    const MatrixXd gram = window_gram(vol, grid, HurstParameter(0.62));
    CHECK(gram.rows() == 48);
    CHECK((gram - gram.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::LLT<MatrixXd> llt(gram);
    CHECK(llt.info() == Eigen::Success);
  }
}

TEST_CASE("randomized structural properties of the window functionals") {
  auto stream = make_stream(314);
  auto random_vol = [&](int which) {
    const double sigma = 0.1 + 2.0 * stream.next_uniform();
    switch (which % 3) {
      case 0: return VolatilitySpec::constant(sigma);
      case 1: return VolatilitySpec::power_law(sigma, 0.05 + 0.9 * stream.next_uniform());
      default:
        return VolatilitySpec::power_sum(sigma, 0.05 + 0.9 * stream.next_uniform(),
                                         1.05 + 2.0 * stream.next_uniform());
    }
  };
  for (int trial = 0; trial < 12; ++trial) {
    const VolatilitySpec vol = random_vol(trial);
    const HurstParameter hurst(0.51 + 0.45 * stream.next_uniform());
    const double t = 0.2 + 1.3 * stream.next_uniform();

    // quadratic scaling
    const double c = 0.3 + 2.0 * stream.next_uniform();
    const double base = theta_total(vol, t, hurst);
    CHECK(theta_total(vol.scaled(c), t, hurst) ==
          doctest::Approx(c * c * base).epsilon(1e-11));

    // symmetry and Cauchy-Schwarz on a random window pair
    const double a1 = t * stream.next_uniform(), b1 = a1 + 0.2 + 0.5 * stream.next_uniform();
    const double a2 = t * stream.next_uniform(), b2 = a2 + 0.2 + 0.5 * stream.next_uniform();
    QuadratureConfig coarse;
    coarse.mesh_cells = 256;  // keeps the general bilinear path quick
    const double fg = h_inner(vol, {a1, b1}, vol, {a2, b2}, hurst, coarse);
    const double gf = h_inner(vol, {a2, b2}, vol, {a1, b1}, hurst, coarse);
    const double ff = h_inner(vol, {a1, b1}, vol, {a1, b1}, hurst, coarse);
    const double gg = h_inner(vol, {a2, b2}, vol, {a2, b2}, hurst, coarse);
    CHECK(fg == doctest::Approx(gf).epsilon(1e-11));
    CHECK(fg * fg <= ff * gg * (1.0 + 1e-9));

    // a positive kernel makes every window inner product non-negative
    CHECK(fg >= 0.0);
  }
}

TEST_CASE("gram of a constant volatility equals the scaled fgn covariance") {
  const UniformGrid grid(32);
  const HurstParameter hurst(0.7);
  const double sigma = 0.83;
  const MatrixXd gram =
      window_gram(VolatilitySpec::constant(sigma), grid, hurst);
  const MatrixXd target = sigma * sigma * fgn_covariance_matrix(grid, hurst);
  CHECK((gram - target).cwiseAbs().maxCoeff() < 1e-10);
}
