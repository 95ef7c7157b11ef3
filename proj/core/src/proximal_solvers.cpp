// IIHT and the two fixed-step thresholding baselines (IHT, IST) share one
// driver: gradient step on the data term followed by a thresholding map.

#include <cmath>
#include <stdexcept>
#include <string>

#include "l0recov/objective.hpp"
#include "l0recov/operators.hpp"
#include "l0recov/solvers.hpp"
#include "l0recov/thresholding.hpp"

namespace l0recov {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_dims(const DenseMatrix& a, std::span<const double> y, std::span<const double> x0,
                const char* who) {
  if (y.size() != a.rows()) {
    throw std::invalid_argument(std::string(who) + ": measurement length " +
                                std::to_string(y.size()) + " does not match matrix rows " +
                                std::to_string(a.rows()));
  }
  if (!x0.empty() && x0.size() != a.cols()) {
    throw std::invalid_argument(std::string(who) + ": initial iterate length " +
                                std::to_string(x0.size()) + " does not match matrix columns " +
                                std::to_string(a.cols()));
  }
}

std::uint32_t delta(std::uint64_t after, std::uint64_t before) {
  return static_cast<std::uint32_t>(after - before);
}

Vector initial_iterate(const DenseMatrix& a, std::span<const double> y, const SolverConfig& config,
                       std::span<const double> x0) {
  if (!x0.empty()) return Vector(x0.begin(), x0.end());
  if (config.init_mode == InitMode::Zero) return Vector(a.cols(), 0.0);
  return apply_adjoint(a, y);
}

double fixed_tau_or_throw(const SolverConfig& config, const char* who) {
  if (const auto* fixed = std::get_if<FixedStep>(&config.step_rule)) return fixed->tau;
  throw std::invalid_argument(std::string(who) + ": requires a fixed step rule");
}

/// Gradient-thresholding loop. `step(r2)` yields tau_k from the current
/// squared residual; `threshold(x_tilde, tau)` maps x_tilde to x_{k+1}.
template <class StepFn, class ThresholdFn>
SolveResult run_thresholding_loop(const DenseMatrix& a, std::span<const double> y,
                                  const SolverConfig& config, std::span<const double> x0,
                                  StepFn&& step, ThresholdFn&& threshold,
                                  const IterationObserver& observer, const OperatorCounts& start) {
  Vector x = initial_iterate(a, y, config, x0);
  Vector r = subtract(y, l0recov::apply(a, x));
  double r2 = norm2_sq(r);
  const OperatorCounts after_init = operator_counts();

  SolveResult result;
  result.trace.reserve(config.max_iters + 1);
  result.trace.push_back(TraceRecord{
      .k = 0,
      .tau = 0.0,
      .objective_l1 = static_cast<double>(count_nonzero(x)) + 0.5 * config.mu * r2,
      .step_norm_sq = 0.0,
      .cum_step_sum = 0.0,
      .residual_norm_sq = r2,
      .nnz = count_nonzero(x),
      .applies = delta(after_init.apply, start.apply),
      .adjoints = delta(after_init.adjoint, start.adjoint),
  });
  if (!all_finite(x) || !std::isfinite(r2)) {
    throw std::invalid_argument("solver: non-finite initial state");
  }

  double cum = 0.0;
  result.stop_reason = StopReason::MaxIters;
  for (std::size_t k = 1; k <= config.max_iters; ++k) {
    const OperatorCounts before = operator_counts();
    const double tau = step(r2);
    const Vector grad = apply_adjoint(a, r);
    Vector x_tilde(x);
    for (std::size_t j = 0; j < x_tilde.size(); ++j) x_tilde[j] += tau * grad[j];
    Vector x_next = threshold(x_tilde, tau);
    if (!all_finite(x_next)) {
      result.stop_reason = StopReason::Diverged;
      break;
    }
    Vector r_next = subtract(y, l0recov::apply(a, x_next));
    const double r2_next = norm2_sq(r_next);
    const OperatorCounts after = operator_counts();
    const double eps = distance_sq(x_next, x);
    const double objective = static_cast<double>(count_nonzero(x_next)) + 0.5 * config.mu * r2_next;
    if (!std::isfinite(r2_next) || !std::isfinite(eps) || !std::isfinite(objective)) {
      result.stop_reason = StopReason::Diverged;
      break;
    }
    cum += eps;
    result.trace.push_back(TraceRecord{
        .k = k,
        .tau = tau,
        .objective_l1 = objective,
        .step_norm_sq = eps,
        .cum_step_sum = cum,
        .residual_norm_sq = r2_next,
        .nnz = count_nonzero(x_next),
        .applies = delta(after.apply, before.apply),
        .adjoints = delta(after.adjoint, before.adjoint),
    });
    if (observer) {
      observer(IterationView{k, tau, x, x_tilde, x_next, r, r_next});
    }

    const double x_norm = norm2(x);
    const bool converged =
        x_norm > 0.0 ? std::sqrt(eps) <= config.tol * x_norm : norm2(x_next) <= config.tol;
    x = std::move(x_next);
    r = std::move(r_next);
    r2 = r2_next;
    result.iterations = k;
    if (converged) {
      result.stop_reason = StopReason::Tolerance;
      break;
    }
  }
  result.x = std::move(x);
  return result;
}

}  // namespace

Vector iiht_step(const DenseMatrix& a, std::span<const double> y, std::span<const double> x_k,
                 double mu, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("iiht_step: tau must be > 0");
  if (!(mu > 0.0)) throw std::invalid_argument("iiht_step: mu must be > 0");
  check_dims(a, y, x_k, "iiht_step");
  if (x_k.size() != a.cols()) throw std::invalid_argument("iiht_step: x_k length mismatch");
  const Vector r = subtract(y, l0recov::apply(a, x_k));
  const Vector grad = apply_adjoint(a, r);
  Vector x_tilde(x_k.begin(), x_k.end());
  for (std::size_t j = 0; j < x_tilde.size(); ++j) x_tilde[j] += tau * grad[j];
  return hard_vector(x_tilde, std::sqrt(2.0 * tau / mu));
}

SolveResult iiht_solve(const DenseMatrix& a, std::span<const double> y, const SolverConfig& config,
                       std::span<const double> x0, const IterationObserver& observer) {
  config.validate();
  check_dims(a, y, x0, "iiht_solve");

  // Constant steps are resolved once; a power iteration is charged to record 0.
  const OperatorCounts start = operator_counts();
  const auto step = std::visit(
      overloaded{
          [](const PaperAdaptiveStep& s) -> std::function<double(double)> {
            return [s](double r2) { return step_size_paper(r2, s.tau_min); };
          },
          [](const FixedStep& s) -> std::function<double(double)> {
            return [tau = s.tau](double) { return tau; };
          },
          [&](const SafeBoundStep& s) -> std::function<double(double)> {
            const double norm_sq =
                config.spectral_norm_sq ? *config.spectral_norm_sq : spectral_norm_sq(a).value;
            return [tau = 1.0 / (norm_sq + s.margin(norm_sq))](double) { return tau; };
          },
      },
      config.step_rule);

  const double mu = config.mu;
  return run_thresholding_loop(
      a, y, config, x0, step,
      [mu](const Vector& x_tilde, double tau) {
        return hard_vector(x_tilde, std::sqrt(2.0 * tau / mu));
      },
      observer, start);
}

SolveResult iht_solve(const DenseMatrix& a, std::span<const double> y, const SolverConfig& config,
                      std::span<const double> x0) {
  config.validate();
  check_dims(a, y, x0, "iht_solve");
  const double tau = fixed_tau_or_throw(config, "iht_solve");
  const std::size_t k = config.sparsity_k;
  if (k > a.cols()) {
    throw std::invalid_argument("iht_solve: sparsity " + std::to_string(k) + " exceeds N = " +
                                std::to_string(a.cols()));
  }
  if (k == 0) {
    SolveResult result;
    result.x.assign(a.cols(), 0.0);
    const double r2 = norm2_sq(y);
    result.trace.push_back(TraceRecord{.objective_l1 = 0.5 * config.mu * r2, .residual_norm_sq = r2});
    result.stop_reason = StopReason::Tolerance;
    return result;
  }
  const OperatorCounts start = operator_counts();
  return run_thresholding_loop(
      a, y, config, x0, [tau](double) { return tau; },
      [k](const Vector& x_tilde, double) { return top_k(x_tilde, k); }, {}, start);
}

SolveResult ist_solve(const DenseMatrix& a, std::span<const double> y, const SolverConfig& config,
                      double l1_oracle, std::span<const double> x0) {
  config.validate();
  check_dims(a, y, x0, "ist_solve");
  if (!(l1_oracle > 0.0) || !std::isfinite(l1_oracle)) {
    throw std::invalid_argument("ist_solve: missing l1 oracle value (need ||x_true||_1 > 0)");
  }
  const double tau = fixed_tau_or_throw(config, "ist_solve");
  const double n = static_cast<double>(a.cols());
  const OperatorCounts start = operator_counts();
  return run_thresholding_loop(
      a, y, config, x0, [tau](double) { return tau; },
      [l1_oracle, n](const Vector& x_tilde, double) {
        const double w = std::max(0.0, (norm1(x_tilde) - l1_oracle) / n);
        return soft_vector(x_tilde, w);
      },
      {}, start);
}

Vector direct_recover(const DenseMatrix& a, std::span<const double> y) {
  return apply_adjoint(a, y);
}

}  // namespace l0recov
