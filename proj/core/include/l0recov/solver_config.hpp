#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "l0recov/dense_matrix.hpp"

namespace l0recov {

enum class InitMode {
  Zero,                ///< x0 = 0
  AdjointMeasurement,  ///< x0 = A^T y
};

/// tau_k = min(1 / r2, r2) with r2 = ||y - A x_k||^2; tau_min when r2 == 0.
struct PaperAdaptiveStep {
  double tau_min = 1e-12;
};

struct FixedStep {
  double tau = 0.5;
};

/// tau_k = 1 / (||A||_2^2 + delta), the step bound under which the
/// penalized objective decreases monotonically. The margin is
/// delta + delta_fraction * ||A||_2^2 and must be positive.
struct SafeBoundStep {
  double delta = 0.0;
  double delta_fraction = 0.0;

  double margin(double norm_sq) const { return delta + delta_fraction * norm_sq; }
};

using StepRule = std::variant<PaperAdaptiveStep, FixedStep, SafeBoundStep>;

struct SolverConfig {
  double mu = 1.0;                ///< weight of the data term in ||x||_0 + mu/2 ||y - Ax||^2
  std::size_t sparsity_k = 0;     ///< sparsity budget K for IHT and CoSaMP
  double tol = 1e-5;              ///< relative-change stopping tolerance
  std::size_t max_iters = 100;
  InitMode init_mode = InitMode::AdjointMeasurement;
  StepRule step_rule = PaperAdaptiveStep{};
  /// Known ||A||_2^2; SafeBoundStep estimates it by power iteration when unset.
  std::optional<double> spectral_norm_sq;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

enum class StopReason {
  Tolerance,
  MaxIters,
  Diverged,  ///< next iterate was non-finite; the last finite iterate is returned
};

std::string_view to_string(StopReason reason);
std::string_view to_string(InitMode mode);

/// State after k iterations. tau / step_norm_sq describe the step that
/// produced x_k from x_{k-1}; both are 0 for the initial record k = 0.
struct TraceRecord {
  std::size_t k = 0;
  double tau = 0.0;
  double objective_l1 = 0.0;      ///< ||x_k||_0 + mu/2 ||y - A x_k||^2
  double step_norm_sq = 0.0;      ///< ||x_k - x_{k-1}||^2
  double cum_step_sum = 0.0;      ///< sum of step_norm_sq over records 1..k
  double residual_norm_sq = 0.0;  ///< ||y - A x_k||^2
  std::size_t nnz = 0;
  /// Operator calls spent producing this record; record 0 also carries setup
  /// work such as the initial iterate and a spectral norm estimate.
  std::uint32_t applies = 0;
  std::uint32_t adjoints = 0;
};

using SolveTrace = std::vector<TraceRecord>;

struct SolveResult {
  Vector x;
  SolveTrace trace;  ///< iterations + 1 records, including the initial state
  StopReason stop_reason = StopReason::MaxIters;
  std::size_t iterations = 0;
  std::vector<std::string> warnings;
};

}  // namespace l0recov
