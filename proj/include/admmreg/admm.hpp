#ifndef ADMMREG_ADMM_HPP_
#define ADMMREG_ADMM_HPP_

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "admmreg/grid_vector.hpp"
#include "admmreg/linear_operator.hpp"
#include "admmreg/penalty.hpp"

namespace admmreg {

enum class XSolverKind { automatic, spectral, cg, dense };

struct AdmmConfig {
  double rho1 = 1000.0;
  double rho2 = 10.0;
  double tau = 1.0001;
  //! Noise level; 0 means exact data and disables the stopping rule.
  double delta = 0.0;
  std::size_t max_iter = 500;
  XSolverKind x_solver = XSolverKind::automatic;
  double cg_tol = 1e-10;
  std::size_t cg_max_iter = 500;
  //! Optional plateau criterion ||y_{k+1} - y_k|| <= plateau_tol (off by default).
  bool plateau_stop = false;
  double plateau_tol = 1e-14;
  //! Verify subgradient membership and multiplier identities each step.
  bool check_invariants = false;

  void validate() const;
};

//! One iterate of the recursion: primal pair (x, y), multipliers (lambda, mu),
//! residuals r = Ax - b and s = Wx - y, and the Lyapunov quantity
//! E = rho1 ||r||^2 + rho2 ||s||^2 + rho2 ||y - y_prev||^2 (defined for k >= 1).
struct AdmmState {
  std::size_t k = 0;
  GridVector x;  // empty until the first x-solve
  GridVector y;
  GridVector lambda;
  GridVector mu;
  GridVector r;
  GridVector s;
  GridVector y_prev;
  double E = std::numeric_limits<double>::quiet_NaN();
};

//! Recomputes E_k = rho1 ||r||^2 + rho2 ||s||^2 + rho2 ||y - y_prev||^2 from
//! the state fields; throws StateError at k = 0 where E is undefined.
double lyapunov(const AdmmState& state, double rho1, double rho2);

struct TraceRecord {
  std::size_t k = 0;
  double r_norm = 0.0;
  double s_norm = 0.0;
  double E = 0.0;
  double f_y = 0.0;
  std::optional<double> err;   // ||x_k - x*|| when ground truth supplied
  std::optional<double> psnr;  // vs ground truth, unit peak mapped to 8-bit scale
  std::size_t inner_iters = 0;
};

enum class StopReason { discrepancy, max_iter, plateau };

std::string to_string(StopReason reason);

//! Worst invariant violations observed across a run (populated when
//! check_invariants is on; all zero for a clean run).
struct InvariantReport {
  double max_subgradient_violation = 0.0;
  //! Relative mismatch between mu_{k+1} and the prox-certified subgradient
  //! rho2 (W x_{k+1} + mu_k / rho2 - y_{k+1}), computed along two paths.
  double max_multiplier_mismatch = 0.0;
  //! max over k of E_{k+1} - E_k + rho1 ||r_{k+1}-r_k||^2 + 4 c0 ||y_{k+1}-y_k||^2
  //! (nonpositive in exact arithmetic).
  double max_decrement_violation = -std::numeric_limits<double>::infinity();
  //! max over k of E_{k+1} - E_k (nonpositive in exact arithmetic).
  double max_energy_increase = -std::numeric_limits<double>::infinity();
};

struct RunResult {
  AdmmState state;
  std::vector<TraceRecord> trace;
  StopReason stop_reason = StopReason::max_iter;
  std::size_t k_stop = 0;
  //! The exact threshold max(rho1^2, rho2^2) tau^2 delta^2 used by the rule.
  double stop_threshold = 0.0;
  InvariantReport invariants;
  double wall_ms = 0.0;
};

//! Interchangeable solver for the x-subproblem normal equations
//! (rho1 A*A + rho2 W*W) x = rhs.
class XSolver {
 public:
  virtual ~XSolver() = default;
  //! warm_start may be null (cold start for iterative solvers).
  virtual GridVector solve(const GridVector& rhs, const GridVector* warm_start,
                           std::size_t* inner_iters) const = 0;
};

std::unique_ptr<XSolver> make_x_solver(const LinearOperator& a, const LinearOperator& w,
                                       const AdmmConfig& cfg);

//! One-shot solve of the x-subproblem
//!   argmin (rho1/2) ||Ax - b + lambda/rho1||^2 + (rho2/2) ||Wx - y + mu/rho2||^2.
GridVector solve_x(const LinearOperator& a, const LinearOperator& w, const GridVector& b,
                   const GridVector& y, const GridVector& lambda, const GridVector& mu,
                   const AdmmConfig& cfg);

//! The four-step recursion with fixed rho1, rho2, plus the noisy-data loop
//! with the discrepancy-style stopping rule. A solver instance owns one run's
//! state exclusively; the operators are shared and immutable.
class AdmmSolver {
 public:
  AdmmSolver(const LinearOperator& a, const LinearOperator& w, GridVector b, Penalty f,
             AdmmConfig cfg);

  //! State at k = 0 with user-supplied starting values.
  AdmmState initial_state(GridVector y0, GridVector lambda0, GridVector mu0) const;

  //! Zero initialization (y_0 = 0, lambda_0 = 0, mu_0 = 0).
  AdmmState initial_state() const;

  //! Advance the state by one full iteration (x, y, lambda, mu updates).
  void step(AdmmState& state, std::size_t* inner_iters = nullptr,
            InvariantReport* report = nullptr) const;

  //! Iterate from `init`, evaluating the stopping rule after each update once
  //! k >= 1. Records one TraceRecord per completed iteration.
  RunResult run(const AdmmState& init, const GridVector* ground_truth = nullptr) const;
  RunResult run(const GridVector* ground_truth = nullptr) const;

  //! rho1^2 ||r||^2 + rho2^2 ||s||^2 <= max(rho1^2, rho2^2) tau^2 delta^2.
  bool stopping_rule_satisfied(const AdmmState& state) const;
  double stop_threshold() const noexcept;

  const AdmmConfig& config() const noexcept { return cfg_; }
  const GridVector& b() const noexcept { return b_; }
  const Penalty& penalty() const noexcept { return f_; }

 private:
  const LinearOperator& a_;
  const LinearOperator& w_;
  GridVector b_;
  Penalty f_;
  AdmmConfig cfg_;
  std::unique_ptr<XSolver> x_solver_;
};

}  // namespace admmreg

#endif  // ADMMREG_ADMM_HPP_
