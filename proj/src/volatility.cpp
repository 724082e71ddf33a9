#include "fbmlab/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace fbmlab {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// mean of t^p over [a, b]
double power_mean(double p, double a, double b) {
  if (b <= a) return std::pow(a, p);
  return (std::pow(b, p + 1.0) - std::pow(a, p + 1.0)) / ((p + 1.0) * (b - a));
}

}  // namespace

VolatilitySpec VolatilitySpec::constant(double sigma) {
  if (!(sigma > 0.0)) throw config_error("volatility: const sigma must be > 0");
  VolatilitySpec v;
  v.kind_ = Kind::Constant;
  v.sigma_ = sigma;
  return v;
}

VolatilitySpec VolatilitySpec::power_law(double sigma, double alpha) {
  if (!(sigma > 0.0)) throw config_error("volatility: pow sigma must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw config_error("volatility: pow alpha must lie in (0, 1)");
  VolatilitySpec v;
  v.kind_ = Kind::PowerLaw;
  v.sigma_ = sigma;
  v.alpha_ = alpha;
  return v;
}

VolatilitySpec VolatilitySpec::power_sum(double sigma, double alpha, double beta) {
  if (!(sigma > 0.0)) throw config_error("volatility: powsum sigma must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw config_error("volatility: powsum alpha must lie in (0, 1)");
  if (!(beta > 1.0)) throw config_error("volatility: powsum beta must be > 1");
  VolatilitySpec v;
  v.kind_ = Kind::PowerSum;
  v.sigma_ = sigma;
  v.alpha_ = alpha;
  v.beta_ = beta;
  return v;
}

VolatilitySpec VolatilitySpec::tabulated(const UniformGrid& grid, VectorXd values) {
  if (values.size() != grid.n)
    throw config_error("volatility: tabulated needs one value per grid cell");
  if ((values.array() < 0.0).any())
    throw config_error("volatility: tabulated values must be >= 0");
  VolatilitySpec v;
  v.kind_ = Kind::Tabulated;
  v.table_ = std::move(values);
  v.table_grid_ = grid;
  return v;
}

VolatilitySpec VolatilitySpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw config_error("volatility: expected <family>:<params>, got '" + text + "'");
  const std::string family = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);

  auto numbers = [&](std::size_t want) {
    std::vector<double> out;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw config_error("volatility: bad number '" + tok + "' in '" + text + "'");
      }
    }
    if (out.size() != want)
      throw config_error("volatility: '" + family + "' needs " + std::to_string(want) +
                         " parameters, got " + std::to_string(out.size()));
    return out;
  };

  if (family == "const") return constant(numbers(1)[0]);
  if (family == "pow") {
    auto p = numbers(2);
    return power_law(p[0], p[1]);
  }
  if (family == "powsum") {
    auto p = numbers(3);
    return power_sum(p[0], p[1], p[2]);
  }
  if (family == "tab") {
    std::ifstream in(rest);
    if (!in) throw config_error("volatility: cannot open table file '" + rest + "'");
    std::vector<double> vals;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      try {
        vals.push_back(std::stod(line));
      } catch (const std::exception&) {
        throw config_error("volatility: bad table line '" + line + "' in " + rest);
      }
    }
    if (vals.empty()) throw config_error("volatility: empty table file '" + rest + "'");
    const Index cells = static_cast<Index>(vals.size());
    VectorXd v = Eigen::Map<VectorXd>(vals.data(), cells);
    return tabulated(UniformGrid(cells, 1.0), std::move(v));
  }
  throw config_error("volatility: unknown family '" + family + "'");
}

double VolatilitySpec::value(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return sigma_;
    case Kind::PowerLaw:
      return sigma_ * std::pow(t, alpha_);
    case Kind::PowerSum:
      return sigma_ * (std::pow(t, alpha_) + std::pow(t, beta_));
    case Kind::Tabulated: {
      const Index i = std::clamp<Index>(
          static_cast<Index>(t / table_grid_.step()), 0, table_grid_.n - 1);
      return table_[i];
    }
  }
  return 0.0;
}

double VolatilitySpec::average(double a, double b) const {
  switch (kind_) {
    case Kind::Constant:
      return sigma_;
    case Kind::PowerLaw:
      return sigma_ * power_mean(alpha_, a, b);
    case Kind::PowerSum:
      return sigma_ * (power_mean(alpha_, a, b) + power_mean(beta_, a, b));
    case Kind::Tabulated: {
      if (b <= a) return value(a);
      const double h = table_grid_.step();
      const Index lo = std::clamp<Index>(static_cast<Index>(a / h), 0, table_grid_.n - 1);
      const Index hi = std::clamp<Index>(static_cast<Index>(b / h) + 1, lo + 1, table_grid_.n);
      double acc = 0.0;
      for (Index i = lo; i < hi; ++i) {
        const double cell_lo = std::max(a, static_cast<double>(i) * h);
        const double cell_hi = std::min(b, static_cast<double>(i + 1) * h);
        if (cell_hi > cell_lo) acc += table_[i] * (cell_hi - cell_lo);
      }
      return acc / (b - a);
    }
  }
  return 0.0;
}

double VolatilitySpec::bound(double horizon) const {
  switch (kind_) {
    case Kind::Constant:
      return sigma_;
    case Kind::PowerLaw:
      return sigma_ * std::pow(horizon, alpha_);
    case Kind::PowerSum:
      return sigma_ * (std::pow(horizon, alpha_) + std::pow(horizon, beta_));
    case Kind::Tabulated:
      return table_.maxCoeff();
  }
  return 0.0;
}

std::string VolatilitySpec::label() const {
  switch (kind_) {
    case Kind::Constant:
      return "const:" + fmt(sigma_);
    case Kind::PowerLaw:
      return "pow:" + fmt(sigma_) + "," + fmt(alpha_);
    case Kind::PowerSum:
      return "powsum:" + fmt(sigma_) + "," + fmt(alpha_) + "," + fmt(beta_);
    case Kind::Tabulated:
      return "tab:" + std::to_string(table_.size()) + "cells";
  }
  return "";
}

VolatilitySpec VolatilitySpec::scaled(double c) const {
  if (!(c > 0.0)) throw config_error("volatility: scale factor must be > 0");
  VolatilitySpec v = *this;
  if (kind_ == Kind::Tabulated)
    v.table_ *= c;
  else
    v.sigma_ *= c;
  return v;
}

}  // namespace fbmlab
