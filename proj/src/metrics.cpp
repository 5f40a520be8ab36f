#include "admmreg/metrics.hpp"

#include <cmath>

#include "admmreg/errors.hpp"

namespace admmreg {

double mean_squared_error(const GridVector& u, const GridVector& ref) {
  require_shape(ref, u.shape, "mean_squared_error");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - ref[i];
    acc += d * d;
  }
  return acc / static_cast<double>(u.size());
}

double psnr(const GridVector& u, const GridVector& ref, double peak) {
  if (!(peak > 0.0)) throw ParameterError("psnr: peak must be positive");
  const double mse = mean_squared_error(u, ref);
  if (mse == 0.0) {
    throw ParameterError("psnr: images are identical, PSNR is not a finite number");
  }
  return 10.0 * std::log10(peak * peak / mse);
}

std::optional<double> psnr_or_none(const GridVector& u, const GridVector& ref, double peak) {
  if (mean_squared_error(u, ref) == 0.0) return std::nullopt;
  return psnr(u, ref, peak);
}

}  // namespace admmreg
