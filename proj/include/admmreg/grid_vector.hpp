#ifndef ADMMREG_GRID_VECTOR_HPP_
#define ADMMREG_GRID_VECTOR_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace admmreg {

//! Grid dimensions: (n) for 1D signals, (rows, cols) for images,
//! (rows, cols, channels) for gradient fields and frame coefficient stacks.
using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_to_string(const Shape& shape);

//! An element of a finite-dimensional Hilbert space: flat values plus the
//! grid shape they are laid out on (row-major, channel fastest).
struct GridVector {
  std::vector<double> values;
  Shape shape;

  GridVector() = default;
  GridVector(std::vector<double> v, Shape s);

  static GridVector zeros(const Shape& s);

  std::size_t size() const noexcept { return values.size(); }
  double& operator[](std::size_t i) noexcept { return values[i]; }
  double operator[](std::size_t i) const noexcept { return values[i]; }

  GridVector& operator+=(const GridVector& other);
  GridVector& operator-=(const GridVector& other);
  GridVector& operator*=(double a) noexcept;

  //! True iff every entry is a finite real number.
  bool all_finite() const noexcept;
};

GridVector operator+(GridVector a, const GridVector& b);
GridVector operator-(GridVector a, const GridVector& b);
GridVector operator*(double a, GridVector v);

double dot(const GridVector& a, const GridVector& b);
double norm(const GridVector& a);
double norm_squared(const GridVector& a);

//! a + alpha * b
GridVector axpy(const GridVector& a, double alpha, const GridVector& b);

void require_shape(const GridVector& v, const Shape& expected, const char* where);
void require_finite(const GridVector& v, const char* where);

}  // namespace admmreg

#endif  // ADMMREG_GRID_VECTOR_HPP_
