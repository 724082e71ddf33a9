#pragma once

#include "fbmlab/types.hpp"
#include "fbmlab/volatility.hpp"

namespace fbmlab {

// Quadratic functionals of the fractional integral operator for H in (1/2, 1).
//
// Everything here reduces to the L^2_H inner product
//   <f, g> = H(2H-1) int int f(s) g(t) |s-t|^{2H-2} ds dt,
// evaluated for piecewise-constant f, g through the exact double antiderivative
// psi(u) = |u|^{2H} / 2 of the kernel:
//   int_a^b int_c^d |s-t|^{2H-2} dt ds
//     = [psi(b-c) - psi(b-d) - psi(a-c) + psi(a-d)] / (H(2H-1)).
// Constant and tabulated volatilities are therefore integrated exactly; the
// power families are refined onto a piecewise-constant mesh of exact cell
// averages (default 4096 cells per window), with doubling as the convergence
// check.  The operator is never applied pointwise - no formula in scope needs
// more than these quadratic functionals.

struct QuadratureConfig {
  Index mesh_cells = 4096;  // refinement of one anchored window
  Index max_subcells = 64;  // cap on the per-grid-cell refinement

  Index subcells_for(Index n) const {
    const Index m = mesh_cells / std::max<Index>(n, 1);
    return std::clamp<Index>(m, 1, max_subcells);
  }
};

// Normalizing constant of the fractional integral operator,
//   [Gamma(2H+1) sin(pi H)]^{1/2} / [2 Gamma(H-1/2) cos(pi (H-1/2) / 2)].
// Kept for documentation and golden-value tests; the functionals above never
// need it.  Tends to 0 at both ends of (1/2, 1) (the Gamma pole at H = 1/2,
// the sine zero at H = 1).  H = 1/2 is the identity regime and is signalled.
double c_h(HurstParameter hurst);

// sigma-weighted indicator window sigma(.) * chi_[lo, hi]
struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

double h_inner(const VolatilitySpec& f, Window wf, const VolatilitySpec& g, Window wg,
               HurstParameter hurst, const QuadratureConfig& quad = {});

// theta(t) = <sigma chi_[0,t], sigma chi_[0,t]>; the accumulated H-energy that
// appears in the price exponent and the option-pricing variance.
double theta_total(const VolatilitySpec& vol, double t, HurstParameter hurst,
                   const QuadratureConfig& quad = {});

// theta_k for the k-th of n grid cells
double theta_cell(const VolatilitySpec& vol, Index k, const UniformGrid& grid,
                  HurstParameter hurst, const QuadratureConfig& quad = {});

// tilde_theta = sum_k h^{1-2H} theta_k, the centering target of the
// quadratic-variation estimator under time-varying volatility
double tilde_theta(const VolatilitySpec& vol, const UniformGrid& grid, HurstParameter hurst,
                   const QuadratureConfig& quad = {});

// delta_k = theta(t_{k+1}) - theta(t_k)
double delta_cell(const VolatilitySpec& vol, Index k, const UniformGrid& grid,
                  HurstParameter hurst, const QuadratureConfig& quad = {});

// Gram matrix of the cell windows f_k = sigma chi_[t_k, t_{k+1}]
MatrixXd window_gram(const VolatilitySpec& vol, const UniformGrid& grid, HurstParameter hurst,
                     const QuadratureConfig& quad = {});

struct ThetaReport {
  double theta_total = 0.0;  // theta(horizon)
  VectorXd theta_cells;
  double tilde_theta = 0.0;
  VectorXd deltas;  // telescopes: deltas.sum() == theta_total
  double hurst = 0.0;
  Index n = 0;
};

// One-pass computation of all cell quantities on a shared mesh; the deltas
// come from anchored partial energies so their sum telescopes to theta_total
// up to float summation error.
ThetaReport theta_report(const VolatilitySpec& vol, const UniformGrid& grid,
                         HurstParameter hurst, const QuadratureConfig& quad = {});

}  // namespace fbmlab
