#include "l0recov/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "l0recov/dense_matrix.hpp"

namespace l0recov {

double rel_err(std::span<const double> x, std::span<const double> x_true) {
  const double ref = norm2(x_true);
  if (ref == 0.0) throw std::invalid_argument("rel_err: ground truth is zero");
  return 100.0 * std::sqrt(distance_sq(x, x_true)) / ref;
}

double psnr(std::span<const double> x, std::span<const double> x_true) {
  const double peak = max_abs(x_true);
  if (peak == 0.0) throw std::invalid_argument("psnr: ground truth is zero");
  const double err = distance_sq(x, x_true);
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(static_cast<double>(x_true.size()) * peak * peak / err);
}

}  // namespace l0recov
