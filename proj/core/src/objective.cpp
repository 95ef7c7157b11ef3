#include "l0recov/objective.hpp"

#include <algorithm>
#include <stdexcept>

#include "l0recov/operators.hpp"

namespace l0recov {

double objective_l1(std::span<const double> x, std::span<const double> y, const DenseMatrix& a,
                    double mu) {
  if (y.size() != a.rows()) throw std::invalid_argument("objective_l1: y length mismatch");
  const Vector r = subtract(y, l0recov::apply(a, x));
  return static_cast<double>(count_nonzero(x)) + 0.5 * mu * norm2_sq(r);
}

double surrogate_l2(std::span<const double> x, std::span<const double> x_k,
                    std::span<const double> y, const DenseMatrix& a, double mu, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("surrogate_l2: tau must be > 0");
  if (x.size() != x_k.size()) throw std::invalid_argument("surrogate_l2: x and x_k lengths differ");
  if (y.size() != a.rows()) throw std::invalid_argument("surrogate_l2: y length mismatch");
  const Vector r_k = subtract(y, l0recov::apply(a, x_k));
  const Vector grad = apply_adjoint(a, r_k);
  const Vector d = subtract(x, x_k);
  return static_cast<double>(count_nonzero(x)) + mu / (2.0 * tau) * norm2_sq(d) -
         mu * dot(grad, d) + 0.5 * mu * norm2_sq(r_k);
}

double step_size_paper(double residual_norm_sq, double tau_min) {
  if (!(residual_norm_sq >= 0.0)) {
    throw std::invalid_argument("step_size_paper: residual norm must be >= 0");
  }
  if (residual_norm_sq == 0.0) return tau_min;
  return std::min(1.0 / residual_norm_sq, residual_norm_sq);
}

}  // namespace l0recov
