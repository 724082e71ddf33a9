#include "fbmlab/fractional_calculus.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace fbmlab {

double c_h(HurstParameter hurst) {
  const double h = hurst.value();
  if (h == 0.5)
    throw identity_regime_error(
        "fractional_calculus: H = 1/2 is the identity regime; no kernel constant applies");
  const double num = std::sqrt(std::tgamma(2.0 * h + 1.0) * std::sin(std::numbers::pi * h));
  const double den =
      2.0 * std::tgamma(h - 0.5) * std::cos(0.5 * std::numbers::pi * (h - 0.5));
  return num / den;
}

namespace {

// sigma restricted to a window, as a piecewise-constant function
struct Pwc {
  VectorXd edges;   // m+1 ascending breakpoints
  VectorXd values;  // m cell values
  bool uniform = false;
};

Pwc refine(const VolatilitySpec& vol, double lo, double hi, Index cells) {
  Pwc out;
  switch (vol.kind()) {
    case VolatilitySpec::Kind::Constant:
      out.edges = VectorXd{{lo, hi}};
      out.values = VectorXd{{vol.sigma()}};
      out.uniform = true;
      return out;
    case VolatilitySpec::Kind::Tabulated: {
      // original breakpoints restricted to the window keep the quadrature exact
      const auto& g = vol.table_grid();
      if (hi > g.horizon * (1.0 + 1e-12))
        throw config_error("fractional_calculus: window exceeds the tabulated horizon");
      std::vector<double> edges{lo};
      for (Index i = 1; i < g.n; ++i) {
        const double e = g.point(i);
        if (e > lo && e < hi) edges.push_back(e);
      }
      edges.push_back(hi);
      const Index m = static_cast<Index>(edges.size()) - 1;
      out.edges = Eigen::Map<VectorXd>(edges.data(), m + 1);
      out.values.resize(m);
      for (Index i = 0; i < m; ++i)
        out.values[i] = vol.value(0.5 * (out.edges[i] + out.edges[i + 1]));
      return out;
    }
    default: {
      // power families: uniform mesh of exact cell averages
      const Index m = std::max<Index>(cells, 1);
      out.edges.resize(m + 1);
      out.values.resize(m);
      const double h = (hi - lo) / static_cast<double>(m);
      for (Index i = 0; i <= m; ++i) out.edges[i] = lo + static_cast<double>(i) * h;
      out.edges[m] = hi;
      for (Index i = 0; i < m; ++i) out.values[i] = vol.average(out.edges[i], out.edges[i + 1]);
      out.uniform = true;
      return out;
    }
  }
}

inline double psi(double u, double two_h) { return 0.5 * std::pow(std::abs(u), two_h); }

// lag weights rho(d) = psi((d+1)h) - 2 psi(dh) + psi((d-1)h) on a uniform mesh
VectorXd lag_weights(Index m, double h, double two_h) {
  VectorXd psis(m + 2);
  for (Index d = 0; d <= m + 1; ++d) psis[d] = psi(static_cast<double>(d) * h, two_h);
  VectorXd rho(m);
  rho[0] = 2.0 * psis[1];
  for (Index d = 1; d < m; ++d) rho[d] = psis[d + 1] - 2.0 * psis[d] + psis[d - 1];
  return rho;
}

// <f, f> for a uniform mesh, grouped by lag
double quadratic_uniform(const VectorXd& v, double h, double two_h) {
  const Index m = v.size();
  const VectorXd rho = lag_weights(m, h, two_h);
  double total = rho[0] * v.squaredNorm();
  for (Index d = 1; d < m; ++d)
    total += 2.0 * rho[d] * v.head(m - d).dot(v.tail(m - d));
  return total;
}

// <f, g> for arbitrary piecewise-constant functions; streams two rows of the
// psi table so memory stays O(m)
double bilinear_general(const Pwc& f, const Pwc& g, double two_h) {
  const Index mf = f.values.size();
  const Index mg = g.values.size();
  VectorXd prev(mg + 1), cur(mg + 1);
  for (Index q = 0; q <= mg; ++q) prev[q] = psi(f.edges[0] - g.edges[q], two_h);
  double total = 0.0;
  for (Index p = 0; p < mf; ++p) {
    for (Index q = 0; q <= mg; ++q) cur[q] = psi(f.edges[p + 1] - g.edges[q], two_h);
    double row = 0.0;
    for (Index q = 0; q < mg; ++q)
      row += g.values[q] * (cur[q] - cur[q + 1] - prev[q] + prev[q + 1]);
    total += f.values[p] * row;
    prev.swap(cur);
  }
  return total;
}

void check_window(Window w, const char* where) {
  if (!(w.lo >= 0.0) || !(w.hi >= w.lo))
    throw config_error(std::string(where) + ": window must satisfy 0 <= lo <= hi");
}

// All grid-cell quantities from one shared mesh of n*m cells.
struct GridEnergies {
  VectorXd cells;     // theta_k
  VectorXd partials;  // theta(t_k), k = 0..n, anchored at 0
  MatrixXd gram;      // optional
};

GridEnergies grid_energies(const VolatilitySpec& vol, const UniformGrid& grid,
                           HurstParameter hurst, const QuadratureConfig& quad,
                           bool with_gram) {
  const Index n = grid.n;
  Index m = quad.subcells_for(n);
  if (vol.kind() == VolatilitySpec::Kind::Constant) m = 1;
  if (vol.kind() == VolatilitySpec::Kind::Tabulated) {
    // align the mesh with the table so the refinement is exact
    const Index nt = vol.table_grid().n;
    if (vol.table_grid().horizon != grid.horizon)
      throw config_error("fractional_calculus: tabulated horizon differs from the grid");
    const Index aligned = std::lcm(n, nt) / n;
    if (aligned <= quad.max_subcells) m = aligned;
  }
  const Index fine = n * m;
  const double h = grid.horizon / static_cast<double>(fine);
  const double two_h = hurst.two_h();

  VectorXd v(fine);
  for (Index i = 0; i < fine; ++i)
    v[i] = vol.average(static_cast<double>(i) * h, static_cast<double>(i + 1) * h);
  const VectorXd rho = lag_weights(fine, h, two_h);

  GridEnergies out;
  out.cells.setZero(n);
  for (Index k = 0; k < n; ++k) {
    const auto block = v.segment(k * m, m);
    double acc = rho[0] * block.squaredNorm();
    for (Index d = 1; d < m; ++d)
      acc += 2.0 * rho[d] * block.head(m - d).dot(block.tail(m - d));
    out.cells[k] = acc;
  }

  out.partials.setZero(n + 1);
  double energy = 0.0;
  for (Index p = 0; p < fine; ++p) {
    double cross = 0.0;
    for (Index i = 0; i < p; ++i) cross += v[i] * rho[p - i];
    energy += 2.0 * v[p] * cross + v[p] * v[p] * rho[0];
    if ((p + 1) % m == 0) out.partials[(p + 1) / m] = energy;
  }

  if (with_gram) {
    out.gram.setZero(n, n);
    for (Index k = 0; k < n; ++k)
      for (Index l = k; l < n; ++l) {
        double acc = 0.0;
        for (Index i = 0; i < m; ++i) {
          const Index row = k * m + i;
          for (Index j = 0; j < m; ++j)
            acc += v[row] * v[l * m + j] * rho[std::abs(row - (l * m + j))];
        }
        out.gram(k, l) = acc;
        out.gram(l, k) = acc;
      }
    out.gram.diagonal() = out.cells;  // same sums; keep them bit-identical
  }
  return out;
}

}  // namespace

double h_inner(const VolatilitySpec& f, Window wf, const VolatilitySpec& g, Window wg,
               HurstParameter hurst, const QuadratureConfig& quad) {
  hurst.require_long_memory("fractional_calculus");
  check_window(wf, "fractional_calculus");
  check_window(wg, "fractional_calculus");
  if (wf.lo == wf.hi || wg.lo == wg.hi) return 0.0;
  const Pwc pf = refine(f, wf.lo, wf.hi, quad.mesh_cells);
  if (wf.lo == wg.lo && wf.hi == wg.hi && &f == &g && pf.uniform && pf.values.size() > 1)
    return quadratic_uniform(pf.values, (wf.hi - wf.lo) / pf.values.size(), hurst.two_h());
  const Pwc pg = refine(g, wg.lo, wg.hi, quad.mesh_cells);
  return bilinear_general(pf, pg, hurst.two_h());
}

double theta_total(const VolatilitySpec& vol, double t, HurstParameter hurst,
                   const QuadratureConfig& quad) {
  hurst.require_long_memory("fractional_calculus");
  if (!(t >= 0.0)) throw config_error("fractional_calculus: theta time must be >= 0");
  if (t == 0.0) return 0.0;
  return h_inner(vol, {0.0, t}, vol, {0.0, t}, hurst, quad);
}

double theta_cell(const VolatilitySpec& vol, Index k, const UniformGrid& grid,
                  HurstParameter hurst, const QuadratureConfig& quad) {
  hurst.require_long_memory("fractional_calculus");
  if (k < 0 || k >= grid.n)
    throw config_error("fractional_calculus: cell index out of range");
  return grid_energies(vol, grid, hurst, quad, false).cells[k];
}

double tilde_theta(const VolatilitySpec& vol, const UniformGrid& grid, HurstParameter hurst,
                   const QuadratureConfig& quad) {
  hurst.require_long_memory("fractional_calculus");
  const auto ge = grid_energies(vol, grid, hurst, quad, false);
  return std::pow(grid.step(), 1.0 - hurst.two_h()) * ge.cells.sum();
}

double delta_cell(const VolatilitySpec& vol, Index k, const UniformGrid& grid,
                  HurstParameter hurst, const QuadratureConfig& quad) {
  hurst.require_long_memory("fractional_calculus");
  if (k < 0 || k >= grid.n)
    throw config_error("fractional_calculus: cell index out of range");
  const auto ge = grid_energies(vol, grid, hurst, quad, false);
  return ge.partials[k + 1] - ge.partials[k];
}

MatrixXd window_gram(const VolatilitySpec& vol, const UniformGrid& grid, HurstParameter hurst,
                     const QuadratureConfig& quad) {
  hurst.require_long_memory("fractional_calculus");
  return grid_energies(vol, grid, hurst, quad, true).gram;
}

ThetaReport theta_report(const VolatilitySpec& vol, const UniformGrid& grid,
                         HurstParameter hurst, const QuadratureConfig& quad) {
  hurst.require_long_memory("fractional_calculus");
  const auto ge = grid_energies(vol, grid, hurst, quad, false);
  ThetaReport report;
  report.theta_total = ge.partials[grid.n];
  report.theta_cells = ge.cells;
  report.tilde_theta = std::pow(grid.step(), 1.0 - hurst.two_h()) * ge.cells.sum();
  report.deltas = ge.partials.tail(grid.n) - ge.partials.head(grid.n);
  report.hurst = hurst.value();
  report.n = grid.n;
  return report;
}

}  // namespace fbmlab
