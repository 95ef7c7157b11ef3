#include "l0recov/problem.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "l0recov/operators.hpp"

namespace l0recov {

std::size_t round_half_up(double value) {
  return static_cast<std::size_t>(std::floor(value + 0.5));
}

MatrixScaling parse_matrix_scaling(std::string_view text) {
  if (text == "raw") return MatrixScaling::Raw;
  if (text == "inv_sqrt_m") return MatrixScaling::InvSqrtM;
  if (text == "unit_columns") return MatrixScaling::UnitColumns;
  throw std::invalid_argument("unknown matrix scaling '" + std::string(text) +
                              "' (expected raw, inv_sqrt_m or unit_columns)");
}

AmplitudeKind parse_amplitude_kind(std::string_view text) {
  if (text == "gaussian") return AmplitudeKind::Gaussian;
  if (text == "spike") return AmplitudeKind::Spike;
  throw std::invalid_argument("unknown amplitude kind '" + std::string(text) +
                              "' (expected gaussian or spike)");
}

std::string_view to_string(MatrixScaling s) {
  switch (s) {
    case MatrixScaling::Raw: return "raw";
    case MatrixScaling::InvSqrtM: return "inv_sqrt_m";
    case MatrixScaling::UnitColumns: return "unit_columns";
  }
  return "unknown";
}

std::string_view to_string(AmplitudeKind k) {
  return k == AmplitudeKind::Gaussian ? "gaussian" : "spike";
}

DenseMatrix scale_measurement_matrix(DenseMatrix a, MatrixScaling scaling) {
  switch (scaling) {
    case MatrixScaling::Raw: return a;
    case MatrixScaling::InvSqrtM: return a.scaled(1.0 / std::sqrt(static_cast<double>(a.rows())));
    case MatrixScaling::UnitColumns: return normalize_columns(a);
  }
  return a;
}

std::size_t ProblemSpec::m() const { return round_half_up(sampling_ratio * static_cast<double>(n)); }

std::size_t ProblemSpec::k() const { return round_half_up(sparsity_level * static_cast<double>(n)); }

void ProblemSpec::validate() const {
  if (n < 1) throw std::invalid_argument("ProblemSpec: n must be >= 1");
  if (!(sampling_ratio > 0.0 && sampling_ratio <= 1.0))
    throw std::invalid_argument("ProblemSpec: sampling ratio must lie in (0, 1]");
  if (!(sparsity_level > 0.0 && sparsity_level <= 1.0))
    throw std::invalid_argument("ProblemSpec: sparsity level must lie in (0, 1]");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("ProblemSpec: noise sigma must be >= 0");
  if (m() < 1) throw std::invalid_argument("ProblemSpec: M = round(SR * N) is 0");
  if (k() < 1) throw std::invalid_argument("ProblemSpec: K = round(SL * N) is 0");
}

Vector gen_sparse_signal(std::size_t n, std::size_t k, RngStream& rng, AmplitudeKind amplitude) {
  if (k > n) {
    throw std::invalid_argument("gen_sparse_signal: k = " + std::to_string(k) + " exceeds n = " +
                                std::to_string(n));
  }
  // Partial Fisher-Yates: the first k slots form a uniform k-subset.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  Vector x(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    double v = 0.0;
    if (amplitude == AmplitudeKind::Spike) {
      v = (rng.next_u64() >> 63) ? 1.0 : -1.0;
    } else {
      do {
        v = rng.normal();
      } while (v == 0.0);
    }
    x[idx[i]] = v;
  }
  return x;
}

Vector gen_noise(std::span<const double> y_clean, double sigma, RngStream& rng) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("gen_noise: sigma must be >= 0");
  Vector e(y_clean.size(), 0.0);
  if (sigma == 0.0 || y_clean.empty()) return e;
  const double scale = sigma * norm1(y_clean) / static_cast<double>(y_clean.size());
  for (double& v : e) v = scale * rng.normal();
  return e;
}

GeneratedProblem measure_signal(Vector x_true, double sampling_ratio, double noise_sigma,
                                MatrixScaling scaling, RngStream& rng) {
  const std::size_t n = x_true.size();
  const std::size_t m = round_half_up(sampling_ratio * static_cast<double>(n));
  if (m < 1) throw std::invalid_argument("measure_signal: M rounds to 0");
  GeneratedProblem p;
  p.a = scale_measurement_matrix(gaussian_matrix(m, n, rng), scaling);
  p.k = count_nonzero(x_true);
  p.x_true = std::move(x_true);
  p.y_clean = l0recov::apply(p.a, p.x_true);
  p.noise = gen_noise(p.y_clean, noise_sigma, rng);
  p.y.resize(m);
  for (std::size_t i = 0; i < m; ++i) p.y[i] = p.y_clean[i] + p.noise[i];
  return p;
}

GeneratedProblem generate_problem(const ProblemSpec& spec) {
  spec.validate();
  RngStream rng(spec.seed);
  GeneratedProblem p;
  p.a = scale_measurement_matrix(gaussian_matrix(spec.m(), spec.n, rng), spec.scaling);
  p.k = spec.k();
  p.x_true = gen_sparse_signal(spec.n, p.k, rng, spec.amplitude);
  p.y_clean = l0recov::apply(p.a, p.x_true);
  p.noise = gen_noise(p.y_clean, spec.noise_sigma, rng);
  p.y.resize(p.y_clean.size());
  for (std::size_t i = 0; i < p.y.size(); ++i) p.y[i] = p.y_clean[i] + p.noise[i];
  return p;
}

}  // namespace l0recov
