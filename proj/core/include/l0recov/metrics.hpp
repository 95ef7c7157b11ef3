#pragma once

#include <cstddef>
#include <span>

#include "l0recov/solver_config.hpp"

namespace l0recov {

/// 100 * ||x - x_true|| / ||x_true||. Throws for a zero ground truth.
double rel_err(std::span<const double> x, std::span<const double> x_true);

/// PSNR in dB with peak = max|x_true_i| and the squared error summed over
/// all N entries:
///
///   10 log10( N * peak^2 / ||x - x_true||^2 )
///
/// Returns +infinity when x equals x_true exactly.
double psnr(std::span<const double> x, std::span<const double> x_true);

struct MetricsReport {
  double rel_err_percent = 0.0;
  double psnr_db = 0.0;
  std::size_t iterations = 0;
  StopReason stop_reason = StopReason::Tolerance;
  double wall_time_seconds = 0.0;
};

}  // namespace l0recov
