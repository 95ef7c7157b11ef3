#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "l0recov/operators.hpp"
#include "l0recov/solvers.hpp"
#include "l0recov/thresholding.hpp"

namespace l0recov {

namespace {

// Restricted least squares switches from a dense Cholesky of the Gram matrix
// to conjugate gradients on the normal equations above this support size.
constexpr std::size_t kDenseSupportLimit = 1024;
constexpr double kRidgeFactor = 1e-10;
constexpr double kCgTolerance = 1e-12;

struct RestrictedSolve {
  Eigen::VectorXd coef;
  bool regularized = false;
};

Eigen::MatrixXd gather_columns(const DenseMatrix& a, const std::vector<std::size_t>& support) {
  Eigen::MatrixXd sub(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(support.size()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    for (std::size_t c = 0; c < support.size(); ++c) {
      sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row[support[c]];
    }
  }
  return sub;
}

RestrictedSolve solve_dense(const Eigen::MatrixXd& sub, const Eigen::VectorXd& rhs) {
  const Eigen::Index t = sub.cols();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(t, t);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(sub.transpose());
  Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(gram);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd coef = llt.solve(rhs);
    if (coef.allFinite()) return {std::move(coef), false};
  }
  const double ridge = kRidgeFactor * std::max(gram.trace(), 1e-300);
  gram.diagonal().array() += ridge;
  Eigen::LDLT<Eigen::MatrixXd, Eigen::Lower> ldlt(gram);
  return {ldlt.solve(rhs), true};
}

// Conjugate gradients on sub^T sub c = rhs, warm-started from `guess`.
RestrictedSolve solve_cg(const Eigen::MatrixXd& sub, const Eigen::VectorXd& rhs,
                         Eigen::VectorXd guess) {
  Eigen::VectorXd c = std::move(guess);
  Eigen::VectorXd res = rhs - sub.transpose() * (sub * c);
  Eigen::VectorXd p = res;
  double rs = res.squaredNorm();
  const double stop = kCgTolerance * kCgTolerance * std::max(rhs.squaredNorm(), 1e-300);
  const Eigen::Index max_iters = std::min<Eigen::Index>(sub.cols(), 1000);
  for (Eigen::Index it = 0; it < max_iters && rs > stop; ++it) {
    const Eigen::VectorXd q = sub.transpose() * (sub * p);
    const double curvature = p.dot(q);
    if (!(curvature > 0.0)) break;
    const double alpha = rs / curvature;
    c += alpha * p;
    res -= alpha * q;
    const double rs_next = res.squaredNorm();
    p = res + (rs_next / rs) * p;
    rs = rs_next;
  }
  return {std::move(c), false};
}

}  // namespace

SolveResult cosamp_solve(const DenseMatrix& a, std::span<const double> y, const SolverConfig& config) {
  config.validate();
  if (y.size() != a.rows()) {
    throw std::invalid_argument("cosamp_solve: measurement length " + std::to_string(y.size()) +
                                " does not match matrix rows " + std::to_string(a.rows()));
  }
  const std::size_t n = a.cols();
  const std::size_t k = config.sparsity_k;
  if (k < 1) throw std::invalid_argument("cosamp_solve: sparsity_k must be >= 1");
  if (k > n) throw std::invalid_argument("cosamp_solve: sparsity_k exceeds N");

  SolveResult result;
  if (a.rows() < 3 * k) {
    result.warnings.push_back("cosamp: M = " + std::to_string(a.rows()) + " < 3K = " +
                              std::to_string(3 * k) + "; recovery guarantees do not apply");
  }

  const Eigen::Map<const Eigen::VectorXd> y_map(y.data(), static_cast<Eigen::Index>(y.size()));
  Vector x(n, 0.0);
  Vector r(y.begin(), y.end());
  double r_norm = norm2(r);
  result.trace.push_back(TraceRecord{
      .objective_l1 = 0.5 * config.mu * r_norm * r_norm,
      .residual_norm_sq = r_norm * r_norm,
  });

  bool warned_singular = false;
  double cum = 0.0;
  result.stop_reason = StopReason::MaxIters;
  for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
    const OperatorCounts before = operator_counts();
    const Vector proxy = apply_adjoint(a, r);

    std::vector<std::size_t> support = top_k_indices(proxy, std::min(2 * k, n));
    for (std::size_t j = 0; j < n; ++j)
      if (x[j] != 0.0) support.push_back(j);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    const Eigen::MatrixXd sub = gather_columns(a, support);
    const Eigen::VectorXd rhs = sub.transpose() * y_map;
    RestrictedSolve ls;
    if (support.size() <= kDenseSupportLimit) {
      ls = solve_dense(sub, rhs);
    } else {
      Eigen::VectorXd guess(static_cast<Eigen::Index>(support.size()));
      for (std::size_t c = 0; c < support.size(); ++c) guess(static_cast<Eigen::Index>(c)) = x[support[c]];
      ls = solve_cg(sub, rhs, std::move(guess));
    }
    if (ls.regularized && !warned_singular) {
      result.warnings.push_back("cosamp: singular restricted Gram matrix; ridge-regularized solve used");
      warned_singular = true;
    }

    Vector b(n, 0.0);
    for (std::size_t c = 0; c < support.size(); ++c) b[support[c]] = ls.coef(static_cast<Eigen::Index>(c));
    Vector x_next = top_k(b, k);
    if (!all_finite(x_next)) {
      result.stop_reason = StopReason::Diverged;
      break;
    }
    Vector r_next = subtract(y, l0recov::apply(a, x_next));
    const double r_next_norm = norm2(r_next);
    if (r_next_norm >= r_norm && iter > 1) {
      // The residual stopped decreasing: keep the previous iterate.
      result.stop_reason = StopReason::Tolerance;
      break;
    }
    const OperatorCounts after = operator_counts();
    const double eps = distance_sq(x_next, x);
    cum += eps;
    result.trace.push_back(TraceRecord{
        .k = iter,
        .tau = 0.0,
        .objective_l1 = static_cast<double>(count_nonzero(x_next)) + 0.5 * config.mu * r_next_norm * r_next_norm,
        .step_norm_sq = eps,
        .cum_step_sum = cum,
        .residual_norm_sq = r_next_norm * r_next_norm,
        .nnz = count_nonzero(x_next),
        .applies = static_cast<std::uint32_t>(after.apply - before.apply),
        .adjoints = static_cast<std::uint32_t>(after.adjoint - before.adjoint),
    });

    const bool stagnated = std::abs(r_norm - r_next_norm) <= config.tol * r_norm;
    x = std::move(x_next);
    r = std::move(r_next);
    r_norm = r_next_norm;
    result.iterations = iter;
    if (stagnated) {
      result.stop_reason = StopReason::Tolerance;
      break;
    }
  }
  result.x = std::move(x);
  return result;
}

}  // namespace l0recov
