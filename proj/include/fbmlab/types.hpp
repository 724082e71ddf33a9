#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fbmlab {

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;
using Index = Eigen::Index;

// Invalid user-facing input (CLI exit code 2).
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed (CLI exit code 3).
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// H = 1/2 makes the fractional integral operator the identity; operations
// built on its H != 1/2 kernel signal this so callers can special-case.
struct identity_regime_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Memory parameter of fractional Brownian motion, constrained to (0, 1).
class HurstParameter {
 public:
  explicit HurstParameter(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0))
      throw config_error("hurst: H must lie in (0, 1), got " + std::to_string(value));
  }

  double value() const { return value_; }
  double two_h() const { return 2.0 * value_; }

  // Theorems 1-3 style central limit results need H < 3/4.
  void require_clt_regime(const char* where) const {
    if (value_ >= 0.75)
      throw config_error(std::string(where) + ": H must be < 3/4 for the CLT regime, got " +
                         std::to_string(value_));
  }

  // The |s-t|^{2H-2} kernel representation of the inner product needs H > 1/2.
  void require_long_memory(const char* where) const {
    if (value_ <= 0.5)
      throw config_error(std::string(where) + ": H must be > 1/2 (long-memory regime), got " +
                         std::to_string(value_));
  }

  friend bool operator==(HurstParameter a, HurstParameter b) { return a.value_ == b.value_; }

 private:
  double value_;
};

// n uniform steps covering [0, horizon]; grid points t_k = k * step.
struct UniformGrid {
  Index n = 0;
  double horizon = 1.0;

  UniformGrid(Index n_, double horizon_ = 1.0) : n(n_), horizon(horizon_) {
    if (n < 1) throw config_error("grid: step count must be >= 1");
    if (!(horizon > 0.0)) throw config_error("grid: horizon must be > 0");
  }

  double step() const { return horizon / static_cast<double>(n); }
  double point(Index k) const { return static_cast<double>(k) * step(); }

  VectorXd points() const {
    VectorXd t(n + 1);
    for (Index k = 0; k <= n; ++k) t[k] = point(k);
    return t;
  }

  friend bool operator==(const UniformGrid& a, const UniformGrid& b) {
    return a.n == b.n && a.horizon == b.horizon;
  }
};

}  // namespace fbmlab
