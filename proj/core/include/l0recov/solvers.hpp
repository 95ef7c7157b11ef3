#pragma once

#include <functional>
#include <span>

#include "l0recov/dense_matrix.hpp"
#include "l0recov/solver_config.hpp"

namespace l0recov {

/// One IIHT update:
///   x_tilde = x_k + tau A^T (y - A x_k)
///   x_next  = hard_vector(x_tilde, sqrt(2 tau / mu))
/// Costs exactly one apply and one apply_adjoint.
Vector iiht_step(const DenseMatrix& a, std::span<const double> y, std::span<const double> x_k,
                 double mu, double tau);

/// Read-only view of one iteration handed to an IterationObserver.
struct IterationView {
  std::size_t k = 0;  ///< index of x_next
  double tau = 0.0;
  std::span<const double> x_prev;
  std::span<const double> x_tilde;
  std::span<const double> x_next;
  std::span<const double> residual_prev;  ///< y - A x_prev
  std::span<const double> residual_next;  ///< y - A x_next
};

using IterationObserver = std::function<void(const IterationView&)>;

/// Inexact iterative hard thresholding for min ||x||_0 + mu/2 ||y - A x||^2.
///
/// Iterates iiht_step with tau_k from config.step_rule. Stops when
/// ||x_{k+1} - x_k|| <= tol ||x_k|| (or ||x_{k+1}|| <= tol when x_k = 0), or
/// after max_iters. `x0`, when non-empty, overrides config.init_mode.
SolveResult iiht_solve(const DenseMatrix& a, std::span<const double> y, const SolverConfig& config,
                       std::span<const double> x0 = {}, const IterationObserver& observer = {});

/// K-sparse IHT: x_{k+1} = top_k(x_k + tau A^T (y - A x_k), K). Requires a
/// FixedStep rule. K = 0 returns the zero vector without iterating.
SolveResult iht_solve(const DenseMatrix& a, std::span<const double> y, const SolverConfig& config,
                      std::span<const double> x0 = {});

/// Iterative soft thresholding with the l1-matching weight
///   w_k = max(0, (||x_tilde||_1 - l1_oracle) / N),
/// where l1_oracle = ||x_true||_1 is supplied by the caller. Requires a
/// FixedStep rule and l1_oracle > 0.
SolveResult ist_solve(const DenseMatrix& a, std::span<const double> y, const SolverConfig& config,
                      double l1_oracle, std::span<const double> x0 = {});

/// CoSaMP with sparsity budget config.sparsity_k. Stops when the residual
/// norm changes by at most tol relative to its previous value, or when an
/// iteration fails to decrease it; in the latter case the previous iterate
/// is returned.
SolveResult cosamp_solve(const DenseMatrix& a, std::span<const double> y, const SolverConfig& config);

/// Direct reconstruction x = A^T y.
Vector direct_recover(const DenseMatrix& a, std::span<const double> y);

}  // namespace l0recov
