#pragma once

#include <string>

#include "fbmlab/types.hpp"

namespace fbmlab {

// Bounded deterministic volatility function sigma(t) on [0, horizon].
//
// Families: Constant   sigma
//           PowerLaw   sigma * t^alpha,             0 < alpha < 1
//           PowerSum   sigma * (t^alpha + t^beta),  0 < alpha < 1 < beta
//           Tabulated  piecewise constant on a uniform grid
//
// String grammar (CLI): const:0.4 | pow:0.4,0.3 | powsum:0.4,0.8,2 | tab:<csv path>
class VolatilitySpec {
 public:
  enum class Kind { Constant, PowerLaw, PowerSum, Tabulated };

  static VolatilitySpec constant(double sigma);
  static VolatilitySpec power_law(double sigma, double alpha);
  static VolatilitySpec power_sum(double sigma, double alpha, double beta);
  static VolatilitySpec tabulated(const UniformGrid& grid, VectorXd values);

  // Parses the string grammar; "tab:" loads one sigma value per line, defining
  // a uniform partition of [0, 1].
  static VolatilitySpec parse(const std::string& text);

  Kind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const VectorXd& table() const { return table_; }
  const UniformGrid& table_grid() const { return table_grid_; }

  double value(double t) const;

  // exact mean of sigma over [a, b]
  double average(double a, double b) const;

  // finite upper bound of sigma on [0, horizon]
  double bound(double horizon) const;

  // Constant and Tabulated are handled exactly by the piecewise-constant
  // quadrature; the power families need mesh refinement.
  bool piecewise_constant() const {
    return kind_ == Kind::Constant || kind_ == Kind::Tabulated;
  }

  // grammar-shaped description used in reports
  std::string label() const;

  // scales sigma(t) pointwise; theta functionals then scale by c^2
  VolatilitySpec scaled(double c) const;

 private:
  VolatilitySpec() : table_grid_(1, 1.0) {}

  Kind kind_ = Kind::Constant;
  double sigma_ = 1.0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  VectorXd table_;
  UniformGrid table_grid_;
};

}  // namespace fbmlab
