#include "l0recov/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace l0recov {

namespace {

thread_local OperatorCounts tls_counts;

void require_dims(std::size_t m, std::size_t n, const char* what) {
  if (m == 0 || n == 0) {
    throw std::invalid_argument(std::string(what) + ": dimensions must be positive, got " +
                                std::to_string(m) + "x" + std::to_string(n));
  }
}

}  // namespace

DenseMatrix gaussian_matrix(std::size_t m, std::size_t n, RngStream& rng) {
  require_dims(m, n, "gaussian_matrix");
  std::vector<double> entries(m * n);
  for (double& v : entries) v = rng.normal();
  return DenseMatrix(m, n, std::move(entries));
}

DenseMatrix random_orthogonal(std::size_t n, RngStream& rng) {
  require_dims(n, n, "random_orthogonal");
  const DenseMatrix g = gaussian_matrix(n, n, rng);
  std::vector<Vector> q;
  q.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector v = g.column(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& prev : q) {
        const double c = dot(prev, v);
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * prev[i];
      }
    }
    const double len = norm2(v);
    // A Gaussian matrix is rank-deficient with probability zero.
    if (len == 0.0) throw std::runtime_error("random_orthogonal: degenerate draw");
    for (double& x : v) x /= len;
    q.push_back(std::move(v));
  }
  DenseMatrix out(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) out(i, j) = q[j][i];
  return out;
}

DenseMatrix normalize_columns(const DenseMatrix& a) {
  Vector norms(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) norms[j] += row[j] * row[j];
  }
  DenseMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto row = out.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (norms[j] > 0.0) row[j] /= std::sqrt(norms[j]);
  }
  return out;
}

Vector apply(const DenseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) {
    throw std::invalid_argument("apply: vector length " + std::to_string(x.size()) +
                                " does not match matrix columns " + std::to_string(a.cols()));
  }
  ++tls_counts.apply;
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

Vector apply_adjoint(const DenseMatrix& a, std::span<const double> r) {
  if (r.size() != a.rows()) {
    throw std::invalid_argument("apply_adjoint: vector length " + std::to_string(r.size()) +
                                " does not match matrix rows " + std::to_string(a.rows()));
  }
  ++tls_counts.adjoint;
  Vector x(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double ri = r[i];
    if (ri == 0.0) continue;
    const auto row = a.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) x[j] += ri * row[j];
  }
  return x;
}

OperatorCounts operator_counts() { return tls_counts; }

SpectralNormEstimate spectral_norm_sq(const DenseMatrix& a, const SpectralNormOptions& options) {
  if (a.empty()) throw std::invalid_argument("spectral_norm_sq: empty matrix");
  if (max_abs(a.entries()) == 0.0) {
    throw std::invalid_argument("spectral_norm_sq: zero matrix has no dominant eigenvector");
  }
  RngStream rng(0x5EC7'4A1B'0000'0001ULL);
  Vector v(a.cols());
  for (double& x : v) x = rng.normal();
  double len = norm2(v);
  for (double& x : v) x /= len;

  SpectralNormEstimate est;
  double previous = 0.0;
  for (std::size_t it = 1; it <= options.max_iters; ++it) {
    const Vector av = apply(a, v);
    const double rayleigh = norm2_sq(av);  // v^T A^T A v with ||v|| = 1
    Vector w = apply_adjoint(a, av);
    len = norm2(w);
    est.value = rayleigh;
    est.iterations = it;
    if (len == 0.0) {
      // Start vector in the null space; restart from a fresh direction.
      for (double& x : v) x = rng.normal();
      const double l = norm2(v);
      for (double& x : v) x /= l;
      previous = 0.0;
      continue;
    }
    for (std::size_t j = 0; j < w.size(); ++j) v[j] = w[j] / len;
    if (it > 1 && std::abs(rayleigh - previous) <= options.tol * rayleigh) {
      est.converged = true;
      break;
    }
    previous = rayleigh;
  }
  return est;
}

}  // namespace l0recov
