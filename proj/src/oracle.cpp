#include "admmreg/oracle.hpp"

#include <cmath>

#include "admmreg/errors.hpp"

namespace admmreg {
namespace {

double vec_norm(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace

OracleSolution solve_small(const DenseMatrix& a, const std::vector<double>& b, const Penalty& f,
                           double feas_tol) {
  const std::size_t m = a.rows;
  const std::size_t n = a.cols;
  if (n > 8) throw ParameterError("solve_small: n must be <= 8");
  if (b.size() != m) throw DimensionError("solve_small: b size mismatch");

  OracleSolution sol;

  // Consistency: least-squares residual of Ax = b decides feasibility.
  {
    std::vector<double> xls = least_squares(a, b);
    std::vector<double> res = matvec(a, xls);
    for (std::size_t i = 0; i < m; ++i) res[i] -= b[i];
    if (vec_norm(res) > feas_tol * std::max(1.0, vec_norm(b))) {
      sol.status = OracleStatus::infeasible;
      return sol;
    }
  }

  const double nu = f.nu();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;

  std::vector<int> sigma(n, 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      sigma[i] = static_cast<int>(c % 3) - 1;
      c /= 3;
    }
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < n; ++i) {
      if (sigma[i] != 0) support.push_back(i);
    }
    const std::size_t k = support.size();

    // KKT on the support: nu x_i + (A^T lambda)_i = -w_i sigma_i, A_S x_S = b.
    DenseMatrix kkt(k + m, k + m);
    std::vector<double> rhs(k + m, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      kkt.at(i, i) = nu;
      for (std::size_t r = 0; r < m; ++r) {
        kkt.at(i, k + r) = a.at(r, support[i]);
        kkt.at(k + r, i) = a.at(r, support[i]);
      }
      rhs[i] = -f.weight(support[i]) * static_cast<double>(sigma[support[i]]);
    }
    for (std::size_t r = 0; r < m; ++r) rhs[k + r] = b[r];

    std::vector<double> z = least_squares(kkt, rhs);
    // The saddle system is ill-conditioned for small nu; a couple of rounds
    // of iterative refinement recover the lost digits.
    for (int round = 0; round < 3; ++round) {
      std::vector<double> resid = matvec(kkt, z);
      for (std::size_t i = 0; i < resid.size(); ++i) resid[i] = rhs[i] - resid[i];
      std::vector<double> dz = least_squares(kkt, resid);
      for (std::size_t i = 0; i < z.size(); ++i) z[i] += dz[i];
    }
    // Verify the pattern solve actually met its equations (rank-deficient
    // duals are fine, inconsistent patterns are not).
    {
      std::vector<double> chk = matvec(kkt, z);
      double worst = 0.0;
      for (std::size_t i = 0; i < chk.size(); ++i) {
        worst = std::max(worst, std::abs(chk[i] - rhs[i]));
      }
      if (worst > 1e-8 * std::max(1.0, vec_norm(rhs))) continue;
    }

    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < k; ++i) x[support[i]] = z[i];
    std::vector<double> lambda(z.begin() + static_cast<long>(k), z.end());

    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) {
      const double xi = x[support[i]];
      ok = (sigma[support[i]] > 0) ? (xi > 0.0) : (xi < 0.0);
    }
    if (!ok) continue;
    std::vector<double> at_lambda = matvec_transpose(a, lambda);
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (sigma[i] == 0) {
        ok = std::abs(at_lambda[i]) <= f.weight(i) + 1e-10;
      }
    }
    if (!ok) continue;

    sol.status = OracleStatus::optimal;
    sol.x = GridVector(std::move(x), Shape{n});
    sol.objective = f.value(sol.x);
    sol.lambda = std::move(lambda);
    sol.sign_pattern = sigma;
    return sol;
  }

  throw std::logic_error("solve_small: no sign pattern accepted for consistent input");
}

}  // namespace admmreg
