#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "l0recov/dense_matrix.hpp"
#include "l0recov/rng.hpp"

namespace l0recov {

/// How the Gaussian measurement matrix is scaled after drawing N(0, 1) entries.
enum class MatrixScaling {
  Raw,          ///< entries N(0, 1)
  InvSqrtM,     ///< entries N(0, 1/M): columns have unit expected norm
  UnitColumns,  ///< every column rescaled to exactly unit norm
};

/// Distribution of the nonzero amplitudes of a synthetic sparse signal.
enum class AmplitudeKind {
  Gaussian,  ///< i.i.d. N(0, 1)
  Spike,     ///< +-1 with equal probability
};

MatrixScaling parse_matrix_scaling(std::string_view text);
AmplitudeKind parse_amplitude_kind(std::string_view text);
std::string_view to_string(MatrixScaling s);
std::string_view to_string(AmplitudeKind k);

DenseMatrix scale_measurement_matrix(DenseMatrix a, MatrixScaling scaling);

struct ProblemSpec {
  std::size_t n = 1024;
  double sampling_ratio = 0.35;  ///< SR = M / N
  double sparsity_level = 0.05;  ///< SL = K / N
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
  MatrixScaling scaling = MatrixScaling::InvSqrtM;
  AmplitudeKind amplitude = AmplitudeKind::Gaussian;

  /// round-half-up(SR * N)
  std::size_t m() const;
  /// round-half-up(SL * N)
  std::size_t k() const;
  /// Throws std::invalid_argument when M or K round to 0 or exceed N.
  void validate() const;
};

struct GeneratedProblem {
  DenseMatrix a;
  Vector x_true;
  Vector y_clean;
  Vector noise;
  Vector y;  ///< y_clean + noise
  std::size_t k = 0;
};

/// Length-n vector with exactly k nonzeros on a uniformly drawn support.
Vector gen_sparse_signal(std::size_t n, std::size_t k, RngStream& rng,
                         AmplitudeKind amplitude = AmplitudeKind::Gaussian);

/// sigma * mean(|y_clean|) * g with g i.i.d. N(0, 1).
Vector gen_noise(std::span<const double> y_clean, double sigma, RngStream& rng);

/// Draws A, then x_true, then the noise, all from one stream seeded with spec.seed.
GeneratedProblem generate_problem(const ProblemSpec& spec);

/// Measures a given signal: A is M x x_true.size() Gaussian (scaled per
/// `scaling`), noise per gen_noise. Used for the phantom study.
GeneratedProblem measure_signal(Vector x_true, double sampling_ratio, double noise_sigma,
                                MatrixScaling scaling, RngStream& rng);

std::size_t round_half_up(double value);

}  // namespace l0recov
