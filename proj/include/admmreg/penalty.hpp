#ifndef ADMMREG_PENALTY_HPP_
#define ADMMREG_PENALTY_HPP_

#include <vector>

#include "admmreg/grid_vector.hpp"

namespace admmreg {

//! The strongly convex penalty f(y) = sum_i w_i |y_i| + (nu/2) ||y||^2.
//!
//! Weights are nonnegative per entry; the default is the plain l1 norm
//! (w_i = 1). The nu-term makes f strongly convex with modulus c0 = nu/2,
//! which is what every monotonicity estimate of the solver relies on.
class Penalty {
 public:
  //! Uniform weight (default 1) on every entry.
  explicit Penalty(double nu, double uniform_weight = 1.0);

  //! Per-entry weights, e.g. per-subband weights for frame coefficients.
  Penalty(double nu, std::vector<double> weights);

  double nu() const noexcept { return nu_; }

  //! Strong-convexity modulus c0 = nu/2.
  double convexity_modulus() const noexcept { return 0.5 * nu_; }

  bool has_uniform_weight() const noexcept { return weights_.empty(); }
  double weight(std::size_t i) const noexcept {
    return weights_.empty() ? uniform_weight_ : weights_[i];
  }

  //! f(y) = sum w_i |y_i| + (nu/2) sum y_i^2.
  double value(const GridVector& y) const;

  //! Unique minimizer of f(y) + (rho2/2) ||y - v||^2, componentwise
  //! y_i = sign(v_i) max(rho2 |v_i| - w_i, 0) / (nu + rho2).
  GridVector prox(const GridVector& v, double rho2) const;

  //! The subgradient rho2 (v - y) certified by prox optimality; requires
  //! y == prox(v, rho2).
  GridVector subgradient_from_prox(const GridVector& v, const GridVector& y, double rho2) const;

  //! Componentwise membership test mu in subdifferential of f at y:
  //! |mu_i - nu y_i - w_i sign(y_i)| <= tol where y_i != 0,
  //! |mu_i| <= w_i + tol where y_i == 0.
  bool check_subgradient(const GridVector& y, const GridVector& mu, double tol = 1e-9) const;

  //! Worst componentwise violation of the membership conditions (0 if mu is
  //! an exact subgradient at y).
  double subgradient_violation(const GridVector& y, const GridVector& mu) const;

  //! Bregman distance f(ybar) - f(y) - <mu, ybar - y> for mu in subdiff f(y).
  //! Always >= (nu/2) ||ybar - y||^2.
  double bregman(const GridVector& ybar, const GridVector& y, const GridVector& mu) const;

 private:
  void require_weight_size(const GridVector& y, const char* where) const;

  double nu_;
  double uniform_weight_ = 1.0;
  std::vector<double> weights_;  // empty => uniform
};

}  // namespace admmreg

#endif  // ADMMREG_PENALTY_HPP_
