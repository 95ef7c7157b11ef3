#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "l0recov/dense_matrix.hpp"
#include "l0recov/solver_config.hpp"

namespace l0recov {

enum class CheckStatus { Pass, Fail, NotApplicable };

std::string_view to_string(CheckStatus status);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  /// Worst observed slack; positive means the inequality held with room.
  double margin = 0.0;
  std::optional<std::size_t> failing_iteration;
  std::string detail;
};

struct VerifyOptions {
  /// Floating-point slack for the descent inequalities, relative to |objective|.
  double relative_slack = 1e-9;
  /// Relative tolerance for the surrogate/objective identity.
  double identity_tolerance = 1e-9;
  /// Final step norm must fall below this fraction of the first one unless the
  /// run stopped on the tolerance test.
  double decay_ratio = 1e-6;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  std::size_t iterations = 0;
  StopReason stop_reason = StopReason::MaxIters;
  double spectral_norm_sq = 0.0;  ///< ||A||_2^2 estimate used for the bounds
  double tau = 0.0;               ///< constant step (0 for the adaptive rule)
  double delta = 0.0;             ///< 1/tau - ||A||_2^2

  bool passed() const;
  const CheckResult* find(std::string_view name) const;
};

// Check names.
inline constexpr std::string_view kCheckSurrogateDescent = "surrogate_descent";
inline constexpr std::string_view kCheckObjectiveDescent = "objective_descent";
inline constexpr std::string_view kCheckStepSummability = "step_summability";
inline constexpr std::string_view kCheckStepDecay = "step_decay";
inline constexpr std::string_view kCheckSurrogateIdentity = "surrogate_identity";
inline constexpr std::string_view kCheckCostContract = "cost_contract";
inline constexpr std::string_view kCheckSurvivorsUnchanged = "survivors_unchanged";

/// Runs iiht_solve on (A, y, config) and checks every iteration against the
/// convergence guarantees of the method:
///   surrogate_descent    L2(x_{k+1}; x_k) <= L2(x_k; x_k) = L1(x_k)
///   objective_descent    L1(x_{k+1}) < L1(x_k) while iterates change
///   step_summability     sum_k ||x_{k+1} - x_k||^2 <= 2 L1(x_0) / (mu delta)
///                        (= ||y||^2 / delta for x_0 = 0)
///   step_decay           last step < decay_ratio * first step, or tolerance stop
///   surrogate_identity   L2 - L1 = mu/2 (||d||^2 / tau - ||A d||^2), d = x_{k+1} - x_k
///   cost_contract        one apply and one apply_adjoint per iteration
///   survivors_unchanged  every x_{k+1} entry is 0 or equals x_tilde exactly
/// The three descent-rate checks are NotApplicable under the adaptive step
/// rule. Violations are reported, never thrown.
VerificationReport verify_theorems(const DenseMatrix& a, std::span<const double> y,
                                   const SolverConfig& config, const VerifyOptions& options = {});

void print_report(std::ostream& out, const VerificationReport& report);

}  // namespace l0recov
