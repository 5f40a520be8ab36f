#include "admmreg/grid_vector.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "admmreg/errors.hpp"

namespace admmreg {

std::size_t shape_size(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return shape.empty() ? 0 : n;
}

std::string shape_to_string(const Shape& shape) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ",";
    os << shape[i];
  }
  os << ")";
  return os.str();
}

GridVector::GridVector(std::vector<double> v, Shape s)
    : values(std::move(v)), shape(std::move(s)) {
  if (values.size() != shape_size(shape)) {
    throw DimensionError("GridVector: " + std::to_string(values.size()) +
                         " values do not fill shape " + shape_to_string(shape));
  }
}

GridVector GridVector::zeros(const Shape& s) {
  GridVector g;
  g.shape = s;
  g.values.assign(shape_size(s), 0.0);
  return g;
}

GridVector& GridVector::operator+=(const GridVector& other) {
  require_shape(other, shape, "operator+=");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += other.values[i];
  return *this;
}

GridVector& GridVector::operator-=(const GridVector& other) {
  require_shape(other, shape, "operator-=");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= other.values[i];
  return *this;
}

GridVector& GridVector::operator*=(double a) noexcept {
  for (double& v : values) v *= a;
  return *this;
}

bool GridVector::all_finite() const noexcept {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

GridVector operator+(GridVector a, const GridVector& b) { return a += b; }
GridVector operator-(GridVector a, const GridVector& b) { return a -= b; }
GridVector operator*(double a, GridVector v) { return v *= a; }

double dot(const GridVector& a, const GridVector& b) {
  require_shape(b, a.shape, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) acc += a.values[i] * b.values[i];
  return acc;
}

double norm_squared(const GridVector& a) {
  double acc = 0.0;
  for (double v : a.values) acc += v * v;
  return acc;
}

double norm(const GridVector& a) { return std::sqrt(norm_squared(a)); }

GridVector axpy(const GridVector& a, double alpha, const GridVector& b) {
  require_shape(b, a.shape, "axpy");
  GridVector out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += alpha * b.values[i];
  return out;
}

void require_shape(const GridVector& v, const Shape& expected, const char* where) {
  if (v.shape != expected) {
    throw DimensionError(std::string(where) + ": shape " + shape_to_string(v.shape) +
                         " does not match expected " + shape_to_string(expected));
  }
}

void require_finite(const GridVector& v, const char* where) {
  if (!v.all_finite()) {
    throw std::runtime_error(std::string(where) + ": non-finite entry in result");
  }
}

}  // namespace admmreg
