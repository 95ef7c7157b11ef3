#pragma once

#include <cstddef>
#include <span>

#include "l0recov/dense_matrix.hpp"

namespace l0recov {

/// Hard threshold: 0 if |b| < t, otherwise b unchanged. An entry exactly at
/// the threshold is kept. Requires t >= 0.
double hard_scalar(double b, double t);

/// hard_scalar applied componentwise.
Vector hard_vector(std::span<const double> x, double t);

/// Keeps the k largest-magnitude entries of x and zeroes the rest. Equal
/// magnitudes are ranked by lower index first. Requires k <= x.size().
Vector top_k(std::span<const double> x, std::size_t k);

/// Indices of the k largest-magnitude entries, same ordering rule as top_k,
/// returned in ascending index order.
std::vector<std::size_t> top_k_indices(std::span<const double> x, std::size_t k);

/// Soft threshold: x_i - w sign(x_i) where |x_i| >= w, else 0. Requires w >= 0.
Vector soft_vector(std::span<const double> x, double w);

}  // namespace l0recov
