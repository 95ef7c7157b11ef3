#pragma once

#include <span>

#include "l0recov/dense_matrix.hpp"

namespace l0recov {

/// Penalized objective ||x||_0 + (mu/2) ||y - A x||_2^2. The l0 term counts
/// exactly nonzero entries.
double objective_l1(std::span<const double> x, std::span<const double> y, const DenseMatrix& a,
                    double mu);

/// Proximal-linearized surrogate of objective_l1 around x_k:
///
///   ||x||_0 + mu/(2 tau) ||x - x_k||^2 - mu <A^T (y - A x_k), x - x_k>
///           + mu/2 ||y - A x_k||^2
///
/// It agrees with objective_l1 at x = x_k and upper-bounds it whenever
/// tau <= 1 / ||A||_2^2. Throws for tau <= 0.
double surrogate_l2(std::span<const double> x, std::span<const double> x_k,
                    std::span<const double> y, const DenseMatrix& a, double mu, double tau);

/// Residual-driven step: min(1 / r2, r2), or tau_min when r2 == 0.
double step_size_paper(double residual_norm_sq, double tau_min = 1e-12);

}  // namespace l0recov
