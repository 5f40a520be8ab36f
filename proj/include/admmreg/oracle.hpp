#ifndef ADMMREG_ORACLE_HPP_
#define ADMMREG_ORACLE_HPP_

#include <vector>

#include "admmreg/dense.hpp"
#include "admmreg/grid_vector.hpp"
#include "admmreg/penalty.hpp"

namespace admmreg {

enum class OracleStatus { optimal, infeasible };

//! Certified minimizer of min f(x) s.t. Ax = b with W = I, together with the
//! dual vector and sign pattern of its KKT certificate.
struct OracleSolution {
  OracleStatus status = OracleStatus::infeasible;
  GridVector x;
  double objective = 0.0;
  std::vector<double> lambda;
  std::vector<int> sign_pattern;
};

//! Brute-force solver for tiny instances (n <= 8): enumerates all 3^n sign
//! patterns, solves each pattern's KKT system, and accepts the pattern whose
//! solution verifies the stationarity, feasibility, and sign conditions.
//! Uniqueness follows from the strong convexity of f, so the first accepted
//! pattern is the answer.
OracleSolution solve_small(const DenseMatrix& a, const std::vector<double>& b, const Penalty& f,
                           double feas_tol = 1e-10);

}  // namespace admmreg

#endif  // ADMMREG_ORACLE_HPP_
