#include "admmreg/linear_operator.hpp"

#include <cmath>
#include <utility>

#include "admmreg/errors.hpp"

namespace admmreg {

GridVector LinearOperator::apply(const GridVector& u) const {
  require_shape(u, domain_, "LinearOperator::apply");
  GridVector out = do_apply(u);
  require_finite(out, "LinearOperator::apply");
  return out;
}

GridVector LinearOperator::apply_adjoint(const GridVector& v) const {
  require_shape(v, range_, "LinearOperator::apply_adjoint");
  GridVector out = do_apply_adjoint(v);
  require_finite(out, "LinearOperator::apply_adjoint");
  return out;
}

// ---------------------------------------------------------------------------
// Dense

DenseOperator::DenseOperator(DenseMatrix matrix)
    : LinearOperator(Shape{matrix.cols}, Shape{matrix.rows}), matrix_(std::move(matrix)) {
  if (matrix_.rows == 0 || matrix_.cols == 0) {
    throw ParameterError("DenseOperator: empty matrix");
  }
}

GridVector DenseOperator::do_apply(const GridVector& u) const {
  return GridVector(matvec(matrix_, u.values), range_shape());
}

GridVector DenseOperator::do_apply_adjoint(const GridVector& v) const {
  return GridVector(matvec_transpose(matrix_, v.values), domain_shape());
}

// ---------------------------------------------------------------------------
// Circulant 1D

CirculantOperator1D::CirculantOperator1D(std::vector<double> kernel)
    : LinearOperator(Shape{kernel.size()}, Shape{kernel.size()}), kernel_(std::move(kernel)) {
  if (kernel_.empty()) throw ParameterError("CirculantOperator1D: empty kernel");
  std::vector<Cplx> k = to_complex(kernel_);
  fft(k, false);
  symbol_ = std::move(k);
}

GridVector CirculantOperator1D::do_apply(const GridVector& u) const {
  std::vector<Cplx> f = to_complex(u.values);
  fft(f, false);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= symbol_[i];
  fft(f, true);
  return GridVector(real_part(f), range_shape());
}

GridVector CirculantOperator1D::do_apply_adjoint(const GridVector& v) const {
  std::vector<Cplx> f = to_complex(v.values);
  fft(f, false);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= std::conj(symbol_[i]);
  fft(f, true);
  return GridVector(real_part(f), domain_shape());
}

// ---------------------------------------------------------------------------
// Circulant 2D

CirculantOperator2D::CirculantOperator2D(std::vector<double> kernel, std::size_t rows,
                                         std::size_t cols)
    : LinearOperator(Shape{rows, cols}, Shape{rows, cols}), rows_(rows), cols_(cols) {
  if (kernel.size() != rows * cols) {
    throw ParameterError("CirculantOperator2D: kernel must be rows*cols");
  }
  std::vector<Cplx> k = to_complex(kernel);
  fft2(k, rows_, cols_, false);
  symbol_ = std::move(k);
}

GridVector CirculantOperator2D::apply_symbol(const GridVector& u, bool conjugate) const {
  std::vector<Cplx> f = to_complex(u.values);
  fft2(f, rows_, cols_, false);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] *= conjugate ? std::conj(symbol_[i]) : symbol_[i];
  }
  fft2(f, rows_, cols_, true);
  return GridVector(real_part(f), Shape{rows_, cols_});
}

GridVector CirculantOperator2D::do_apply(const GridVector& u) const {
  return apply_symbol(u, false);
}

GridVector CirculantOperator2D::do_apply_adjoint(const GridVector& v) const {
  return apply_symbol(v, true);
}

// ---------------------------------------------------------------------------
// Periodic forward-difference gradient

GradientOperator2D::GradientOperator2D(std::size_t rows, std::size_t cols)
    : LinearOperator(Shape{rows, cols}, Shape{rows, cols, 2}), rows_(rows), cols_(cols) {
  if (rows < 2 || cols < 2) throw ParameterError("GradientOperator2D: grid too small");
}

GridVector GradientOperator2D::do_apply(const GridVector& u) const {
  GridVector out = GridVector::zeros(range_shape());
  for (std::size_t i = 0; i < rows_; ++i) {
    const std::size_t inext = (i + 1 == rows_) ? 0 : i + 1;
    for (std::size_t j = 0; j < cols_; ++j) {
      const std::size_t jnext = (j + 1 == cols_) ? 0 : j + 1;
      const double uij = u[i * cols_ + j];
      out[(i * cols_ + j) * 2 + 0] = u[i * cols_ + jnext] - uij;
      out[(i * cols_ + j) * 2 + 1] = u[inext * cols_ + j] - uij;
    }
  }
  return out;
}

GridVector GradientOperator2D::do_apply_adjoint(const GridVector& v) const {
  GridVector out = GridVector::zeros(domain_shape());
  for (std::size_t i = 0; i < rows_; ++i) {
    const std::size_t iprev = (i == 0) ? rows_ - 1 : i - 1;
    for (std::size_t j = 0; j < cols_; ++j) {
      const std::size_t jprev = (j == 0) ? cols_ - 1 : j - 1;
      const double h = v[(i * cols_ + jprev) * 2 + 0] - v[(i * cols_ + j) * 2 + 0];
      const double w = v[(iprev * cols_ + j) * 2 + 1] - v[(i * cols_ + j) * 2 + 1];
      out[i * cols_ + j] = h + w;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Undecimated tensor-product framelets

namespace {

std::size_t frame_channels(FrameFamily family, std::size_t levels) {
  const std::size_t nfilters = family == FrameFamily::haar ? 2 : 3;
  return (nfilters * nfilters - 1) * levels + 1;
}

}  // namespace

TightFrameOperator::TightFrameOperator(FrameFamily family, std::size_t levels, std::size_t rows,
                                       std::size_t cols)
    : LinearOperator(Shape{rows, cols}, Shape{rows, cols, frame_channels(family, levels)}),
      family_(family),
      levels_(levels),
      rows_(rows),
      cols_(cols),
      channels_(frame_channels(family, levels)) {
  if (levels_ == 0) throw ParameterError("TightFrameOperator: levels must be >= 1");
  if (rows_ < 2 || cols_ < 2) throw ParameterError("TightFrameOperator: grid too small");
  const double r2 = std::sqrt(2.0) / 4.0;
  switch (family_) {
    case FrameFamily::haar:
      filters_ = {{{0.5, 0.5}, {0, 1}}, {{0.5, -0.5}, {0, 1}}};
      break;
    case FrameFamily::linear_bspline:
      filters_ = {{{0.25, 0.5, 0.25}, {-1, 0, 1}},
                  {{r2, 0.0, -r2}, {-1, 0, 1}},
                  {{-0.25, 0.5, -0.25}, {-1, 0, 1}}};
      break;
  }
}

TightFrameOperator::Plane TightFrameOperator::correlate(const Plane& in, const Filter& f,
                                                        std::size_t step, bool along_rows) const {
  Plane out(rows_ * cols_, 0.0);
  const long nr = static_cast<long>(rows_);
  const long nc = static_cast<long>(cols_);
  for (long i = 0; i < nr; ++i) {
    for (long j = 0; j < nc; ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < f.taps.size(); ++t) {
        const long off = static_cast<long>(step) * f.offsets[t];
        long ii = i;
        long jj = j;
        if (along_rows) {
          ii = (i + off) % nr;
          if (ii < 0) ii += nr;
        } else {
          jj = (j + off) % nc;
          if (jj < 0) jj += nc;
        }
        acc += f.taps[t] * in[static_cast<std::size_t>(ii) * cols_ + static_cast<std::size_t>(jj)];
      }
      out[static_cast<std::size_t>(i) * cols_ + static_cast<std::size_t>(j)] = acc;
    }
  }
  return out;
}

TightFrameOperator::Plane TightFrameOperator::correlate_adjoint(const Plane& in, const Filter& f,
                                                                std::size_t step,
                                                                bool along_rows) const {
  Plane out(rows_ * cols_, 0.0);
  const long nr = static_cast<long>(rows_);
  const long nc = static_cast<long>(cols_);
  for (long i = 0; i < nr; ++i) {
    for (long j = 0; j < nc; ++j) {
      const double v = in[static_cast<std::size_t>(i) * cols_ + static_cast<std::size_t>(j)];
      for (std::size_t t = 0; t < f.taps.size(); ++t) {
        const long off = static_cast<long>(step) * f.offsets[t];
        long ii = i;
        long jj = j;
        if (along_rows) {
          ii = (i + off) % nr;
          if (ii < 0) ii += nr;
        } else {
          jj = (j + off) % nc;
          if (jj < 0) jj += nc;
        }
        out[static_cast<std::size_t>(ii) * cols_ + static_cast<std::size_t>(jj)] += f.taps[t] * v;
      }
    }
  }
  return out;
}

GridVector TightFrameOperator::do_apply(const GridVector& u) const {
  GridVector out = GridVector::zeros(range_shape());
  Plane lowpass(u.values.begin(), u.values.end());
  std::size_t channel = 0;
  for (std::size_t level = 1; level <= levels_; ++level) {
    const std::size_t step = std::size_t{1} << (level - 1);
    // Cache the row pass for each filter, then combine along columns.
    std::vector<Plane> rowpass;
    rowpass.reserve(filters_.size());
    for (const Filter& f : filters_) rowpass.push_back(correlate(lowpass, f, step, true));
    Plane next_lowpass;
    for (std::size_t fa = 0; fa < filters_.size(); ++fa) {
      for (std::size_t fb = 0; fb < filters_.size(); ++fb) {
        Plane band = correlate(rowpass[fa], filters_[fb], step, false);
        if (fa == 0 && fb == 0) {
          next_lowpass = std::move(band);
        } else {
          for (std::size_t p = 0; p < band.size(); ++p) {
            out.values[p * channels_ + channel] = band[p];
          }
          ++channel;
        }
      }
    }
    lowpass = std::move(next_lowpass);
  }
  for (std::size_t p = 0; p < lowpass.size(); ++p) {
    out.values[p * channels_ + channel] = lowpass[p];
  }
  return out;
}

GridVector TightFrameOperator::do_apply_adjoint(const GridVector& v) const {
  const std::size_t npix = rows_ * cols_;
  Plane recon(npix);
  for (std::size_t p = 0; p < npix; ++p) {
    recon[p] = v.values[p * channels_ + (channels_ - 1)];
  }
  // Details of level L occupy the channels right before the lowpass.
  std::size_t channel = channels_ - 1;
  const std::size_t details_per_level = filters_.size() * filters_.size() - 1;
  for (std::size_t level = levels_; level >= 1; --level) {
    const std::size_t step = std::size_t{1} << (level - 1);
    const std::size_t first = channel - details_per_level;
    Plane acc(npix, 0.0);
    std::size_t c = first;
    for (std::size_t fa = 0; fa < filters_.size(); ++fa) {
      for (std::size_t fb = 0; fb < filters_.size(); ++fb) {
        Plane band;
        if (fa == 0 && fb == 0) {
          band = std::move(recon);
        } else {
          band.resize(npix);
          for (std::size_t p = 0; p < npix; ++p) band[p] = v.values[p * channels_ + c];
          ++c;
        }
        Plane colpass = correlate_adjoint(band, filters_[fb], step, false);
        Plane full = correlate_adjoint(colpass, filters_[fa], step, true);
        for (std::size_t p = 0; p < npix; ++p) acc[p] += full[p];
      }
    }
    recon = std::move(acc);
    channel = first;
  }
  return GridVector(std::move(recon), domain_shape());
}

// ---------------------------------------------------------------------------
// Factories

std::shared_ptr<DenseOperator> make_gaussian_kernel_1d(double gamma, std::size_t n) {
  if (!(gamma > 0.0)) throw ParameterError("make_gaussian_kernel_1d: gamma must be positive");
  if (n < 2) throw ParameterError("make_gaussian_kernel_1d: n must be >= 2");
  DenseMatrix m(n, n);
  const double amp = gamma / std::sqrt(M_PI);
  const double quad = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double t = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
      const double d = s - t;
      m.at(i, j) = quad * amp * std::exp(-d * d / (2.0 * gamma * gamma));
    }
  }
  return std::make_shared<DenseOperator>(std::move(m));
}

std::shared_ptr<TightFrameOperator> make_tight_frame(FrameFamily family, std::size_t levels,
                                                     const Shape& image_shape) {
  if (image_shape.size() != 2) {
    throw ParameterError("make_tight_frame: image shape must be (rows, cols)");
  }
  return std::make_shared<TightFrameOperator>(family, levels, image_shape[0], image_shape[1]);
}

// ---------------------------------------------------------------------------
// Spectral diagonal

double SpectralDiagonal::min_multiplier() const {
  double m = multipliers.empty() ? 0.0 : multipliers[0];
  for (double v : multipliers) {
    if (v < m) m = v;
  }
  return m;
}

namespace {

// |symbol|^2 of A*A for DFT-diagonalizable A kinds, or the W*W symbol.
std::vector<double> gram_symbol(const LinearOperator& op, const Shape& grid, const char* role) {
  const std::size_t n = shape_size(grid);
  if (op.kind() == OperatorKind::identity || op.kind() == OperatorKind::tight_frame) {
    return std::vector<double>(n, 1.0);
  }
  if (const auto* c1 = dynamic_cast<const CirculantOperator1D*>(&op)) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::norm(c1->symbol()[i]);
    return out;
  }
  if (const auto* c2 = dynamic_cast<const CirculantOperator2D*>(&op)) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::norm(c2->symbol()[i]);
    return out;
  }
  if (const auto* g = dynamic_cast<const GradientOperator2D*>(&op)) {
    const std::size_t rows = g->rows();
    const std::size_t cols = g->cols();
    std::vector<double> out(n);
    for (std::size_t p = 0; p < rows; ++p) {
      const double sp = std::sin(M_PI * static_cast<double>(p) / static_cast<double>(rows));
      for (std::size_t q = 0; q < cols; ++q) {
        const double sq = std::sin(M_PI * static_cast<double>(q) / static_cast<double>(cols));
        out[p * cols + q] = 4.0 * sp * sp + 4.0 * sq * sq;
      }
    }
    return out;
  }
  throw UnsupportedOperatorError(std::string("build_spectral_diagonal: ") + role +
                                 " operator has no DFT diagonalization");
}

}  // namespace

SpectralDiagonal build_spectral_diagonal(const LinearOperator& a, const LinearOperator& w,
                                         double rho1, double rho2, double divisor_floor) {
  if (a.kind() != OperatorKind::identity && a.kind() != OperatorKind::circulant1d &&
      a.kind() != OperatorKind::circulant2d) {
    throw UnsupportedOperatorError("build_spectral_diagonal: A must be circulant or identity");
  }
  if (a.domain_shape() != w.domain_shape()) {
    throw DimensionError("build_spectral_diagonal: A and W domain shapes differ");
  }
  const Shape grid = a.domain_shape();
  std::vector<double> sym_a = gram_symbol(a, grid, "A");
  std::vector<double> sym_w = gram_symbol(w, grid, "W");
  SpectralDiagonal diag;
  diag.grid_shape = grid;
  diag.divisor_floor = divisor_floor;
  diag.multipliers.resize(sym_a.size());
  for (std::size_t i = 0; i < sym_a.size(); ++i) {
    double m = rho1 * sym_a[i] + rho2 * sym_w[i];
    if (m < 0.0) m = 0.0;  // rounding guard; symbols are nonnegative
    diag.multipliers[i] = m;
  }
  return diag;
}

GridVector spectral_solve(const SpectralDiagonal& diag, const GridVector& rhs) {
  require_shape(rhs, diag.grid_shape, "spectral_solve");
  std::vector<Cplx> f = to_complex(rhs.values);
  if (diag.grid_shape.size() == 1) {
    fft(f, false);
  } else {
    fft2(f, diag.grid_shape[0], diag.grid_shape[1], false);
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double m = diag.multipliers[i] < diag.divisor_floor ? diag.divisor_floor
                                                              : diag.multipliers[i];
    f[i] /= m;
  }
  if (diag.grid_shape.size() == 1) {
    fft(f, true);
  } else {
    fft2(f, diag.grid_shape[0], diag.grid_shape[1], true);
  }
  return GridVector(real_part(f), diag.grid_shape);
}

}  // namespace admmreg
