#ifndef ADMMREG_LINEAR_OPERATOR_HPP_
#define ADMMREG_LINEAR_OPERATOR_HPP_

#include <memory>
#include <vector>

#include "admmreg/dense.hpp"
#include "admmreg/fft.hpp"
#include "admmreg/grid_vector.hpp"

namespace admmreg {

enum class OperatorKind { dense, circulant1d, circulant2d, gradient2d, identity, tight_frame };

//! A finite-dimensional linear operator with an exact adjoint. Operators are
//! immutable after construction and safe to share across solver runs.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual OperatorKind kind() const noexcept = 0;
  const Shape& domain_shape() const noexcept { return domain_; }
  const Shape& range_shape() const noexcept { return range_; }

  GridVector apply(const GridVector& u) const;
  GridVector apply_adjoint(const GridVector& v) const;

 protected:
  LinearOperator(Shape domain, Shape range)
      : domain_(std::move(domain)), range_(std::move(range)) {}

  virtual GridVector do_apply(const GridVector& u) const = 0;
  virtual GridVector do_apply_adjoint(const GridVector& v) const = 0;

 private:
  Shape domain_;
  Shape range_;
};

class IdentityOperator final : public LinearOperator {
 public:
  explicit IdentityOperator(Shape shape) : LinearOperator(shape, shape) {}
  OperatorKind kind() const noexcept override { return OperatorKind::identity; }

 protected:
  GridVector do_apply(const GridVector& u) const override { return u; }
  GridVector do_apply_adjoint(const GridVector& v) const override { return v; }
};

class DenseOperator final : public LinearOperator {
 public:
  //! Domain (cols), range (rows).
  explicit DenseOperator(DenseMatrix matrix);
  OperatorKind kind() const noexcept override { return OperatorKind::dense; }
  const DenseMatrix& matrix() const noexcept { return matrix_; }

 protected:
  GridVector do_apply(const GridVector& u) const override;
  GridVector do_apply_adjoint(const GridVector& v) const override;

 private:
  DenseMatrix matrix_;
};

//! Cyclic convolution with a stored kernel; the adjoint is cyclic correlation,
//! realized by conjugating the kernel's Fourier symbol.
class CirculantOperator1D final : public LinearOperator {
 public:
  explicit CirculantOperator1D(std::vector<double> kernel);
  OperatorKind kind() const noexcept override { return OperatorKind::circulant1d; }
  const std::vector<Cplx>& symbol() const noexcept { return symbol_; }
  const std::vector<double>& kernel() const noexcept { return kernel_; }

 protected:
  GridVector do_apply(const GridVector& u) const override;
  GridVector do_apply_adjoint(const GridVector& v) const override;

 private:
  std::vector<double> kernel_;
  std::vector<Cplx> symbol_;
};

class CirculantOperator2D final : public LinearOperator {
 public:
  //! Kernel given as a full rows x cols image indexed by wrapped offsets
  //! (entry (0,0) multiplies the unshifted sample).
  CirculantOperator2D(std::vector<double> kernel, std::size_t rows, std::size_t cols);
  OperatorKind kind() const noexcept override { return OperatorKind::circulant2d; }
  const std::vector<Cplx>& symbol() const noexcept { return symbol_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

 protected:
  GridVector do_apply(const GridVector& u) const override;
  GridVector do_apply_adjoint(const GridVector& v) const override;

 private:
  GridVector apply_symbol(const GridVector& u, bool conjugate) const;

  std::size_t rows_;
  std::size_t cols_;
  std::vector<Cplx> symbol_;
};

//! Periodic forward-difference gradient: (rows, cols) -> (rows, cols, 2) with
//! channel 0 the horizontal and channel 1 the vertical difference. The null
//! space is exactly the constant images.
class GradientOperator2D final : public LinearOperator {
 public:
  GradientOperator2D(std::size_t rows, std::size_t cols);
  OperatorKind kind() const noexcept override { return OperatorKind::gradient2d; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

 protected:
  GridVector do_apply(const GridVector& u) const override;
  GridVector do_apply_adjoint(const GridVector& v) const override;

 private:
  std::size_t rows_;
  std::size_t cols_;
};

enum class FrameFamily { haar, linear_bspline };

//! Undecimated (a-trous, periodic) tensor-product framelet analysis operator.
//! Subband channels are ordered detail banks of level 1..L followed by the
//! level-L lowpass; the filters are normalized so that W* W = I.
class TightFrameOperator final : public LinearOperator {
 public:
  TightFrameOperator(FrameFamily family, std::size_t levels, std::size_t rows, std::size_t cols);
  OperatorKind kind() const noexcept override { return OperatorKind::tight_frame; }

  FrameFamily family() const noexcept { return family_; }
  std::size_t levels() const noexcept { return levels_; }
  std::size_t channels() const noexcept { return channels_; }
  //! Channel index of the coarsest lowpass subband (the last channel).
  std::size_t lowpass_channel() const noexcept { return channels_ - 1; }

 protected:
  GridVector do_apply(const GridVector& u) const override;
  GridVector do_apply_adjoint(const GridVector& v) const override;

 private:
  struct Filter {
    std::vector<double> taps;
    std::vector<int> offsets;
  };

  using Plane = std::vector<double>;

  Plane correlate(const Plane& in, const Filter& f, std::size_t step, bool along_rows) const;
  Plane correlate_adjoint(const Plane& in, const Filter& f, std::size_t step,
                          bool along_rows) const;

  FrameFamily family_;
  std::size_t levels_;
  std::size_t rows_;
  std::size_t cols_;
  std::size_t channels_;
  std::vector<Filter> filters_;
};

//! Dense n x n discretization of the Gaussian convolution kernel
//! k(s,t) = (gamma/sqrt(pi)) exp(-(s-t)^2 / (2 gamma^2)) on [0,1] by the
//! midpoint rule: A[i][j] = (1/n) k(s_i, t_j), s_i = (i+0.5)/n.
std::shared_ptr<DenseOperator> make_gaussian_kernel_1d(double gamma, std::size_t n);

std::shared_ptr<TightFrameOperator> make_tight_frame(FrameFamily family, std::size_t levels,
                                                     const Shape& image_shape);

//! Frequency-domain multipliers of rho1 A*A + rho2 W*W for operator pairs
//! jointly diagonalized by the DFT (A circulant or identity; W identity,
//! circulant, periodic gradient, or tight frame). Pointwise division by the
//! multipliers followed by an inverse FFT solves the normal equations.
struct SpectralDiagonal {
  Shape grid_shape;
  std::vector<double> multipliers;
  double divisor_floor = 1e-12;

  double min_multiplier() const;
};

SpectralDiagonal build_spectral_diagonal(const LinearOperator& a, const LinearOperator& w,
                                         double rho1, double rho2, double divisor_floor = 1e-12);

GridVector spectral_solve(const SpectralDiagonal& diag, const GridVector& rhs);

}  // namespace admmreg

#endif  // ADMMREG_LINEAR_OPERATOR_HPP_
