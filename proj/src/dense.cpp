#include "admmreg/dense.hpp"

#include <algorithm>
#include <cmath>

#include "admmreg/errors.hpp"

namespace admmreg {

std::vector<double> matvec(const DenseMatrix& m, const std::vector<double>& x) {
  std::vector<double> out(m.rows, 0.0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    double acc = 0.0;
    const double* row = &m.data[r * m.cols];
    for (std::size_t c = 0; c < m.cols; ++c) acc += row[c] * x[c];
    out[r] = acc;
  }
  return out;
}

std::vector<double> matvec_transpose(const DenseMatrix& m, const std::vector<double>& x) {
  std::vector<double> out(m.cols, 0.0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double xr = x[r];
    const double* row = &m.data[r * m.cols];
    for (std::size_t c = 0; c < m.cols; ++c) out[c] += row[c] * xr;
  }
  return out;
}

CholeskyFactor::CholeskyFactor(DenseMatrix spd) : l_(std::move(spd)) {
  const std::size_t n = l_.rows;
  if (n != l_.cols) throw DimensionError("CholeskyFactor: matrix not square");
  for (std::size_t j = 0; j < n; ++j) {
    double d = l_.at(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l_.at(j, k) * l_.at(j, k);
    if (d <= 0.0 || !std::isfinite(d)) {
      throw SolverError("Cholesky: matrix not positive definite at pivot " + std::to_string(j), d);
    }
    const double ljj = std::sqrt(d);
    l_.at(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = l_.at(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l_.at(i, k) * l_.at(j, k);
      l_.at(i, j) = v / ljj;
    }
    for (std::size_t c = j + 1; c < n; ++c) l_.at(j, c) = 0.0;
  }
}

std::vector<double> CholeskyFactor::solve(const std::vector<double>& b) const {
  const std::size_t n = l_.rows;
  if (b.size() != n) throw DimensionError("CholeskyFactor::solve: size mismatch");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= l_.at(i, k) * y[k];
    y[i] = v / l_.at(i, i);
  }
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double v = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) v -= l_.at(k, ii) * x[k];
    x[ii] = v / l_.at(ii, ii);
  }
  return x;
}

std::vector<double> least_squares(const DenseMatrix& a, const std::vector<double>& b,
                                  double rank_tol) {
  const std::size_t m = a.rows;
  const std::size_t n = a.cols;
  if (b.size() != m) throw DimensionError("least_squares: rhs size mismatch");

  DenseMatrix r = a;
  std::vector<double> rhs = b;
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < n; ++j) perm[j] = j;
  std::vector<double> colnorm(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) colnorm[j] += r.at(i, j) * r.at(i, j);
  }

  const std::size_t steps = std::min(m, n);
  std::size_t rank = 0;
  double first_pivot = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    std::size_t best = k;
    for (std::size_t j = k + 1; j < n; ++j) {
      if (colnorm[j] > colnorm[best]) best = j;
    }
    if (best != k) {
      for (std::size_t i = 0; i < m; ++i) std::swap(r.at(i, k), r.at(i, best));
      std::swap(colnorm[k], colnorm[best]);
      std::swap(perm[k], perm[best]);
    }
    double sigma = 0.0;
    for (std::size_t i = k; i < m; ++i) sigma += r.at(i, k) * r.at(i, k);
    sigma = std::sqrt(sigma);
    if (k == 0) first_pivot = sigma;
    if (sigma <= rank_tol * std::max(1.0, first_pivot)) break;
    ++rank;
    if (r.at(k, k) > 0.0) sigma = -sigma;
    // Householder vector stored below the diagonal, v_k implicit.
    const double vk = r.at(k, k) - sigma;
    std::vector<double> v(m - k);
    v[0] = vk;
    for (std::size_t i = k + 1; i < m; ++i) v[i - k] = r.at(i, k);
    double vtv = 0.0;
    for (double x : v) vtv += x * x;
    r.at(k, k) = sigma;
    for (std::size_t i = k + 1; i < m; ++i) r.at(i, k) = 0.0;
    if (vtv > 0.0) {
      for (std::size_t j = k + 1; j < n; ++j) {
        double proj = 0.0;
        for (std::size_t i = k; i < m; ++i) proj += v[i - k] * r.at(i, j);
        proj *= 2.0 / vtv;
        for (std::size_t i = k; i < m; ++i) r.at(i, j) -= proj * v[i - k];
      }
      double proj = 0.0;
      for (std::size_t i = k; i < m; ++i) proj += v[i - k] * rhs[i];
      proj *= 2.0 / vtv;
      for (std::size_t i = k; i < m; ++i) rhs[i] -= proj * v[i - k];
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      colnorm[j] -= r.at(k, j) * r.at(k, j);
      if (colnorm[j] < 0.0) colnorm[j] = 0.0;
    }
  }

  std::vector<double> z(n, 0.0);
  for (std::size_t ii = rank; ii-- > 0;) {
    double v = rhs[ii];
    for (std::size_t j = ii + 1; j < rank; ++j) v -= r.at(ii, j) * z[j];
    z[ii] = v / r.at(ii, ii);
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) x[perm[j]] = z[j];
  return x;
}

}  // namespace admmreg
