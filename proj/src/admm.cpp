#include "admmreg/admm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>

#include "admmreg/errors.hpp"
#include "admmreg/metrics.hpp"

namespace admmreg {

void AdmmConfig::validate() const {
  if (!(rho1 > 0.0)) throw ParameterError("AdmmConfig: rho1 must be positive");
  if (!(rho2 > 0.0)) throw ParameterError("AdmmConfig: rho2 must be positive");
  if (!(tau > 1.0)) throw ParameterError("AdmmConfig: tau must be > 1");
  if (delta < 0.0) throw ParameterError("AdmmConfig: delta must be nonnegative");
  if (max_iter == 0) throw ParameterError("AdmmConfig: max_iter must be positive");
}

double lyapunov(const AdmmState& state, double rho1, double rho2) {
  if (state.k < 1) throw StateError("lyapunov: E is undefined before the first iteration");
  return rho1 * norm_squared(state.r) + rho2 * norm_squared(state.s) +
         rho2 * norm_squared(state.y - state.y_prev);
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::discrepancy: return "discrepancy";
    case StopReason::max_iter: return "max_iter";
    case StopReason::plateau: return "plateau";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// x-solvers

namespace {

GridVector normal_apply(const LinearOperator& a, const LinearOperator& w, double rho1, double rho2,
                        const GridVector& x) {
  GridVector out = a.apply_adjoint(a.apply(x));
  out *= rho1;
  GridVector wt = w.apply_adjoint(w.apply(x));
  wt *= rho2;
  out += wt;
  return out;
}

class SpectralXSolver final : public XSolver {
 public:
  explicit SpectralXSolver(SpectralDiagonal diag) : diag_(std::move(diag)) {}

  GridVector solve(const GridVector& rhs, const GridVector*, std::size_t* inner_iters) const override {
    if (inner_iters) *inner_iters = 0;
    return spectral_solve(diag_, rhs);
  }

 private:
  SpectralDiagonal diag_;
};

class DenseXSolver final : public XSolver {
 public:
  DenseXSolver(const LinearOperator& a, const LinearOperator& w, double rho1, double rho2)
      : factor_(assemble(a, w, rho1, rho2)), shape_(a.domain_shape()) {}

  GridVector solve(const GridVector& rhs, const GridVector*, std::size_t* inner_iters) const override {
    if (inner_iters) *inner_iters = 0;
    return GridVector(factor_.solve(rhs.values), shape_);
  }

 private:
  static DenseMatrix assemble(const LinearOperator& a, const LinearOperator& w, double rho1,
                              double rho2) {
    const Shape& domain = a.domain_shape();
    const std::size_t n = shape_size(domain);
    DenseMatrix m(n, n);
    GridVector unit = GridVector::zeros(domain);
    for (std::size_t j = 0; j < n; ++j) {
      unit.values[j] = 1.0;
      GridVector col = normal_apply(a, w, rho1, rho2, unit);
      for (std::size_t i = 0; i < n; ++i) m.at(i, j) = col[i];
      unit.values[j] = 0.0;
    }
    return m;
  }

  CholeskyFactor factor_;
  Shape shape_;
};

class CgXSolver final : public XSolver {
 public:
  CgXSolver(const LinearOperator& a, const LinearOperator& w, const AdmmConfig& cfg)
      : a_(a), w_(w), rho1_(cfg.rho1), rho2_(cfg.rho2), tol_(cfg.cg_tol),
        max_iter_(cfg.cg_max_iter) {}

  GridVector solve(const GridVector& rhs, const GridVector* warm_start,
                   std::size_t* inner_iters) const override {
    GridVector x = warm_start ? *warm_start : GridVector::zeros(rhs.shape);
    GridVector r = rhs;
    if (warm_start) r -= normal_apply(a_, w_, rho1_, rho2_, x);
    const double rhs_norm = norm(rhs);
    const double target = tol_ * (rhs_norm > 0.0 ? rhs_norm : 1.0);
    double rr = norm_squared(r);
    if (std::sqrt(rr) <= target) {
      if (inner_iters) *inner_iters = 0;
      return x;
    }
    GridVector p = r;
    std::size_t it = 0;
    while (it < max_iter_) {
      ++it;
      GridVector q = normal_apply(a_, w_, rho1_, rho2_, p);
      const double pq = dot(p, q);
      if (!(pq > 0.0)) {
        throw SolverError("cg: operator not positive definite along search direction", pq);
      }
      const double alpha = rr / pq;
      x = axpy(x, alpha, p);
      r = axpy(r, -alpha, q);
      const double rr_new = norm_squared(r);
      if (std::sqrt(rr_new) <= target) {
        rr = rr_new;
        break;
      }
      const double beta = rr_new / rr;
      rr = rr_new;
      p = axpy(r, beta, p);
    }
    if (std::sqrt(rr) > target) {
      throw SolverError("cg: no convergence within " + std::to_string(max_iter_) + " iterations",
                        std::sqrt(rr) / (rhs_norm > 0.0 ? rhs_norm : 1.0));
    }
    if (inner_iters) *inner_iters = it;
    return x;
  }

 private:
  const LinearOperator& a_;
  const LinearOperator& w_;
  double rho1_;
  double rho2_;
  double tol_;
  std::size_t max_iter_;
};

bool spectral_pair_supported(const LinearOperator& a, const LinearOperator& w) {
  const bool a_ok = a.kind() == OperatorKind::identity || a.kind() == OperatorKind::circulant1d ||
                    a.kind() == OperatorKind::circulant2d;
  const bool w_ok = w.kind() == OperatorKind::identity || w.kind() == OperatorKind::circulant1d ||
                    w.kind() == OperatorKind::circulant2d ||
                    w.kind() == OperatorKind::gradient2d || w.kind() == OperatorKind::tight_frame;
  return a_ok && w_ok && a.domain_shape() == w.domain_shape();
}

constexpr std::size_t kDenseDimensionCap = 2000;

}  // namespace

std::unique_ptr<XSolver> make_x_solver(const LinearOperator& a, const LinearOperator& w,
                                       const AdmmConfig& cfg) {
  switch (cfg.x_solver) {
    case XSolverKind::spectral:
      return std::make_unique<SpectralXSolver>(
          build_spectral_diagonal(a, w, cfg.rho1, cfg.rho2));
    case XSolverKind::dense:
      return std::make_unique<DenseXSolver>(a, w, cfg.rho1, cfg.rho2);
    case XSolverKind::cg:
      return std::make_unique<CgXSolver>(a, w, cfg);
    case XSolverKind::automatic:
      break;
  }
  if (spectral_pair_supported(a, w)) {
    return std::make_unique<SpectralXSolver>(build_spectral_diagonal(a, w, cfg.rho1, cfg.rho2));
  }
  if (shape_size(a.domain_shape()) <= kDenseDimensionCap) {
    return std::make_unique<DenseXSolver>(a, w, cfg.rho1, cfg.rho2);
  }
  return std::make_unique<CgXSolver>(a, w, cfg);
}

GridVector solve_x(const LinearOperator& a, const LinearOperator& w, const GridVector& b,
                   const GridVector& y, const GridVector& lambda, const GridVector& mu,
                   const AdmmConfig& cfg) {
  cfg.validate();
  auto solver = make_x_solver(a, w, cfg);
  GridVector rhs = a.apply_adjoint(axpy(cfg.rho1 * b, -1.0, lambda));
  rhs += w.apply_adjoint(axpy(cfg.rho2 * y, -1.0, mu));
  return solver->solve(rhs, nullptr, nullptr);
}

// ---------------------------------------------------------------------------
// AdmmSolver

AdmmSolver::AdmmSolver(const LinearOperator& a, const LinearOperator& w, GridVector b, Penalty f,
                       AdmmConfig cfg)
    : a_(a), w_(w), b_(std::move(b)), f_(std::move(f)), cfg_(cfg) {
  cfg_.validate();
  require_shape(b_, a_.range_shape(), "AdmmSolver: b");
  if (a_.domain_shape() != w_.domain_shape()) {
    throw DimensionError("AdmmSolver: A and W have different domains");
  }
  x_solver_ = make_x_solver(a_, w_, cfg_);
}

AdmmState AdmmSolver::initial_state(GridVector y0, GridVector lambda0, GridVector mu0) const {
  require_shape(y0, w_.range_shape(), "AdmmSolver: y0");
  require_shape(lambda0, a_.range_shape(), "AdmmSolver: lambda0");
  require_shape(mu0, w_.range_shape(), "AdmmSolver: mu0");
  AdmmState state;
  state.k = 0;
  state.y = std::move(y0);
  state.lambda = std::move(lambda0);
  state.mu = std::move(mu0);
  state.y_prev = state.y;
  return state;
}

AdmmState AdmmSolver::initial_state() const {
  return initial_state(GridVector::zeros(w_.range_shape()), GridVector::zeros(a_.range_shape()),
                       GridVector::zeros(w_.range_shape()));
}

void AdmmSolver::step(AdmmState& state, std::size_t* inner_iters, InvariantReport* report) const {
  const double rho1 = cfg_.rho1;
  const double rho2 = cfg_.rho2;

  // x-update: (rho1 A*A + rho2 W*W) x = A*(rho1 b - lambda) + W*(rho2 y - mu)
  GridVector rhs = a_.apply_adjoint(axpy(rho1 * b_, -1.0, state.lambda));
  rhs += w_.apply_adjoint(axpy(rho2 * state.y, -1.0, state.mu));
  const GridVector* warm = state.x.size() ? &state.x : nullptr;
  GridVector x = x_solver_->solve(rhs, warm, inner_iters);

  // y-update: prox of f at W x_{k+1} + mu_k / rho2
  GridVector wx = w_.apply(x);
  GridVector v = axpy(wx, 1.0 / rho2, state.mu);
  GridVector y_new = f_.prox(v, rho2);

  // multiplier updates (eq. r/s bookkeeping shares the exact same vectors)
  GridVector r = a_.apply(x) - b_;
  GridVector s = wx - y_new;
  GridVector lambda_new = axpy(state.lambda, rho1, r);
  GridVector mu_new = axpy(state.mu, rho2, s);

  const double e = rho1 * norm_squared(r) + rho2 * norm_squared(s) +
                   rho2 * norm_squared(y_new - state.y);

  if (cfg_.check_invariants && report) {
    const double sub = f_.subgradient_violation(y_new, mu_new);
    report->max_subgradient_violation = std::max(report->max_subgradient_violation, sub);
    // mu_{k+1} computed two ways: accumulated vs the prox subgradient rho2(v - y).
    GridVector mu_prox = f_.subgradient_from_prox(v, y_new, rho2);
    double mism = norm(mu_new - mu_prox);
    const double scale = std::max(1.0, norm(mu_new));
    report->max_multiplier_mismatch = std::max(report->max_multiplier_mismatch, mism / scale);
  }

  state.y_prev = std::move(state.y);
  state.y = std::move(y_new);
  state.x = std::move(x);
  state.lambda = std::move(lambda_new);
  state.mu = std::move(mu_new);
  state.r = std::move(r);
  state.s = std::move(s);
  state.E = e;
  ++state.k;
}

double AdmmSolver::stop_threshold() const noexcept {
  const double m = std::max(cfg_.rho1 * cfg_.rho1, cfg_.rho2 * cfg_.rho2);
  return m * cfg_.tau * cfg_.tau * cfg_.delta * cfg_.delta;
}

bool AdmmSolver::stopping_rule_satisfied(const AdmmState& state) const {
  if (state.k < 1) return false;
  const double lhs = cfg_.rho1 * cfg_.rho1 * norm_squared(state.r) +
                     cfg_.rho2 * cfg_.rho2 * norm_squared(state.s);
  return lhs <= stop_threshold();
}

RunResult AdmmSolver::run(const AdmmState& init, const GridVector* ground_truth) const {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult result;
  result.stop_threshold = stop_threshold();
  result.state = init;
  result.trace.reserve(std::min<std::size_t>(cfg_.max_iter, 4096));

  const double c0 = f_.convexity_modulus();
  bool have_prev = false;
  double e_prev = 0.0;
  GridVector r_prev;

  for (std::size_t iter = 0; iter < cfg_.max_iter; ++iter) {
    std::size_t inner = 0;
    step(result.state, &inner, &result.invariants);
    const AdmmState& st = result.state;

    if (have_prev) {
      // Sharpened decrement bookkeeping; slack is checked by callers.
      const double d_e = st.E - e_prev;
      result.invariants.max_energy_increase =
          std::max(result.invariants.max_energy_increase, d_e);
      const double decrement = d_e + cfg_.rho1 * norm_squared(st.r - r_prev) +
                               4.0 * c0 * norm_squared(st.y - st.y_prev);
      result.invariants.max_decrement_violation =
          std::max(result.invariants.max_decrement_violation, decrement);
    }
    have_prev = true;
    e_prev = st.E;
    r_prev = st.r;

    TraceRecord rec;
    rec.k = st.k;
    rec.r_norm = norm(st.r);
    rec.s_norm = norm(st.s);
    rec.E = st.E;
    rec.f_y = f_.value(st.y);
    rec.inner_iters = inner;
    if (ground_truth) {
      rec.err = norm(st.x - *ground_truth);
      rec.psnr = psnr_or_none(st.x, *ground_truth, 1.0);
    }
    result.trace.push_back(std::move(rec));

    if (cfg_.delta > 0.0 && stopping_rule_satisfied(st)) {
      result.stop_reason = StopReason::discrepancy;
      result.k_stop = st.k;
      result.wall_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0).count();
      return result;
    }
    if (cfg_.plateau_stop && st.k >= 1 && norm(st.y - st.y_prev) <= cfg_.plateau_tol) {
      result.stop_reason = StopReason::plateau;
      result.k_stop = st.k;
      result.wall_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0).count();
      return result;
    }
  }
  result.stop_reason = StopReason::max_iter;
  result.k_stop = result.state.k;
  result.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

RunResult AdmmSolver::run(const GridVector* ground_truth) const {
  return run(initial_state(), ground_truth);
}

}  // namespace admmreg
