#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "l0recov/dense_matrix.hpp"
#include "l0recov/rng.hpp"

namespace l0recov {

/// M x N matrix of i.i.d. N(0, 1) entries drawn row by row from `rng`.
DenseMatrix gaussian_matrix(std::size_t m, std::size_t n, RngStream& rng);

/// n x n orthogonal matrix: modified Gram-Schmidt (two passes) on the columns
/// of a Gaussian matrix.
DenseMatrix random_orthogonal(std::size_t n, RngStream& rng);

/// Copy of `a` with every nonzero column rescaled to unit Euclidean norm.
DenseMatrix normalize_columns(const DenseMatrix& a);

/// y = A x
Vector apply(const DenseMatrix& a, std::span<const double> x);
/// x = A^T r
Vector apply_adjoint(const DenseMatrix& a, std::span<const double> r);

/// Number of apply / apply_adjoint calls made on the calling thread.
/// Solvers record per-iteration deltas of these counters in their traces.
struct OperatorCounts {
  std::uint64_t apply = 0;
  std::uint64_t adjoint = 0;
};
OperatorCounts operator_counts();

struct SpectralNormOptions {
  std::size_t max_iters = 500;
  double tol = 1e-8;
};

struct SpectralNormEstimate {
  double value = 0.0;  ///< estimate of ||A||_2^2 = lambda_max(A^T A)
  std::size_t iterations = 0;
  bool converged = false;  ///< true: relative change <= tol; false: max_iters hit
};

/// Power iteration on A^T A from a fixed pseudorandom start vector.
/// Throws std::invalid_argument for an empty or all-zero matrix.
SpectralNormEstimate spectral_norm_sq(const DenseMatrix& a, const SpectralNormOptions& options = {});

}  // namespace l0recov
