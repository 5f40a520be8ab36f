#include "admmreg/penalty.hpp"

#include <cmath>
#include <utility>

#include "admmreg/errors.hpp"

namespace admmreg {
namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

Penalty::Penalty(double nu, double uniform_weight)
    : nu_(nu), uniform_weight_(uniform_weight) {
  if (!(nu > 0.0)) throw ParameterError("Penalty: nu must be positive");
  if (uniform_weight < 0.0) throw ParameterError("Penalty: weight must be nonnegative");
}

Penalty::Penalty(double nu, std::vector<double> weights)
    : nu_(nu), weights_(std::move(weights)) {
  if (!(nu > 0.0)) throw ParameterError("Penalty: nu must be positive");
  for (double w : weights_) {
    if (w < 0.0) throw ParameterError("Penalty: weights must be nonnegative");
  }
}

void Penalty::require_weight_size(const GridVector& y, const char* where) const {
  if (!weights_.empty() && weights_.size() != y.size()) {
    throw DimensionError(std::string(where) + ": vector has " + std::to_string(y.size()) +
                         " entries but penalty carries " + std::to_string(weights_.size()) +
                         " weights");
  }
}

double Penalty::value(const GridVector& y) const {
  require_weight_size(y, "Penalty::value");
  double l1 = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    l1 += weight(i) * std::abs(y[i]);
    sq += y[i] * y[i];
  }
  return l1 + 0.5 * nu_ * sq;
}

GridVector Penalty::prox(const GridVector& v, double rho2) const {
  if (!(rho2 > 0.0)) throw ParameterError("Penalty::prox: rho2 must be positive");
  require_weight_size(v, "Penalty::prox");
  GridVector y = v;
  const double denom = nu_ + rho2;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double shrunk = rho2 * std::abs(v[i]) - weight(i);
    y[i] = shrunk > 0.0 ? sign(v[i]) * shrunk / denom : 0.0;
  }
  return y;
}

GridVector Penalty::subgradient_from_prox(const GridVector& v, const GridVector& y,
                                          double rho2) const {
  require_shape(y, v.shape, "Penalty::subgradient_from_prox");
  GridVector mu = v;
  for (std::size_t i = 0; i < v.size(); ++i) mu[i] = rho2 * (v[i] - y[i]);
  return mu;
}

double Penalty::subgradient_violation(const GridVector& y, const GridVector& mu) const {
  require_shape(mu, y.shape, "Penalty::subgradient_violation");
  require_weight_size(y, "Penalty::subgradient_violation");
  double worst = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double v;
    if (y[i] != 0.0) {
      v = std::abs(mu[i] - nu_ * y[i] - weight(i) * sign(y[i]));
    } else {
      v = std::abs(mu[i]) - weight(i);
    }
    if (v > worst) worst = v;
  }
  return worst < 0.0 ? 0.0 : worst;
}

bool Penalty::check_subgradient(const GridVector& y, const GridVector& mu, double tol) const {
  return subgradient_violation(y, mu) <= tol;
}

double Penalty::bregman(const GridVector& ybar, const GridVector& y, const GridVector& mu) const {
  require_shape(ybar, y.shape, "Penalty::bregman");
  return value(ybar) - value(y) - dot(mu, ybar - y);
}

}  // namespace admmreg
