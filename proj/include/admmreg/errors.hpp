#ifndef ADMMREG_ERRORS_HPP_
#define ADMMREG_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace admmreg {

//! Shape of an argument does not match the operator or penalty it is fed to.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

//! A scalar or structural parameter is outside its admissible range.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

//! Requested a spectral solve for an operator pair that has no joint diagonalization.
class UnsupportedOperatorError : public std::runtime_error {
 public:
  explicit UnsupportedOperatorError(const std::string& what) : std::runtime_error(what) {}
};

//! An inner solver failed to reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

//! Operation requested on a state that does not define it (e.g. E at k = 0).
class StateError : public std::logic_error {
 public:
  explicit StateError(const std::string& what) : std::logic_error(what) {}
};

//! File could not be read or written, or has a malformed format.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace admmreg

#endif  // ADMMREG_ERRORS_HPP_
