#ifndef ADMMREG_DENSE_HPP_
#define ADMMREG_DENSE_HPP_

#include <cstddef>
#include <vector>

namespace admmreg {

//! Minimal row-major dense matrix used by the dense x-solver and the
//! sign-pattern oracle. Sizes here stay in the low thousands.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) noexcept { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const noexcept { return data[r * cols + c]; }
};

std::vector<double> matvec(const DenseMatrix& m, const std::vector<double>& x);
std::vector<double> matvec_transpose(const DenseMatrix& m, const std::vector<double>& x);

//! In-place lower Cholesky factor of a symmetric positive definite matrix.
//! Throws SolverError when a pivot is not positive.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(DenseMatrix spd);
  std::vector<double> solve(const std::vector<double>& b) const;
  std::size_t dim() const noexcept { return l_.rows; }

 private:
  DenseMatrix l_;
};

//! Basic least-squares solution of m x n (possibly rank-deficient) systems via
//! column-pivoted Householder QR. Out-of-rank coordinates are set to zero;
//! callers verify the residual themselves.
std::vector<double> least_squares(const DenseMatrix& a, const std::vector<double>& b,
                                  double rank_tol = 1e-12);

}  // namespace admmreg

#endif  // ADMMREG_DENSE_HPP_
