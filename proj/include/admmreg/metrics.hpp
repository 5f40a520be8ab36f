#ifndef ADMMREG_METRICS_HPP_
#define ADMMREG_METRICS_HPP_

#include <optional>

#include "admmreg/grid_vector.hpp"

namespace admmreg {

double mean_squared_error(const GridVector& u, const GridVector& ref);

//! 10 log10(peak^2 / MSE) in dB. Throws ParameterError when u == ref
//! (the value would be infinite; callers treat that as a distinct condition).
double psnr(const GridVector& u, const GridVector& ref, double peak = 255.0);

//! PSNR, or nullopt for identical inputs.
std::optional<double> psnr_or_none(const GridVector& u, const GridVector& ref,
                                   double peak = 255.0);

}  // namespace admmreg

#endif  // ADMMREG_METRICS_HPP_
