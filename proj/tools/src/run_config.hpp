#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "l0recov/problem.hpp"
#include "l0recov/solver_config.hpp"
#include "l0recov/trial.hpp"

namespace l0recov::cli {

/// Bad config file content or flag value (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemSection {
  std::size_t n = 4096;
  double sr = 0.35;
  double sl = 0.05;
  std::vector<double> sigmas{0.10, 0.20};
  std::vector<double> mus{350.0, 170.0};  ///< paired with sigmas
  MatrixScaling scaling = MatrixScaling::InvSqrtM;
  AmplitudeKind amplitude = AmplitudeKind::Gaussian;
};

struct RunSection {
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::filesystem::path out = "l0recov_out";
  std::size_t parallel = 1;
  bool timing = false;  ///< write measured times into CSV files
  int verbosity = 1;    ///< 0 quiet, 1 progress every 10 iterations, 2 every iteration
};

struct SolverSection {
  std::vector<Method> solvers{kAllMethods.begin(), kAllMethods.end()};
  double tol = 1e-5;
  std::size_t max_iters = 100;
  InitMode init = InitMode::AdjointMeasurement;
};

struct IihtSection {
  std::string step = "adaptive";  ///< adaptive | fixed | safe
  double tau = 0.5;               ///< fixed step
  double delta_fraction = 0.01;   ///< safe step: delta = fraction * ||A||^2
  double tau_min = 1e-12;
};

struct PhantomSection {
  std::size_t side = 128;
  std::size_t nnz = 1282;
  double sr = 0.35;
  double sigma = 0.08;
  double mu = 256.0;
  std::size_t max_iters = 800;
  std::uint64_t seed = 1;
};

struct VerifySection {
  std::vector<std::size_t> sizes{256, 1024};
  std::size_t instances = 5;
  std::vector<double> sigmas{0.0, 0.10};
  double sr = 0.35;
  double sl = 0.05;
  double mu = 350.0;
  double delta_fraction = 0.01;
  /// tau = tau_scale / (||A||^2 + delta). Values above 1 deliberately break the step bound.
  double tau_scale = 1.0;
  std::size_t max_iters = 10000;
  bool include_special = true;  ///< add a y = 0 instance and an orthogonal instance
};

struct SolveSection {
  std::filesystem::path a;
  std::filesystem::path y;
  std::filesystem::path x_true;  ///< optional, enables metrics
  std::filesystem::path x_out;   ///< default <out>/x.bin
  Method solver = Method::Iiht;
  double mu = 350.0;
  std::size_t k = 0;          ///< sparsity budget for IHT and CoSaMP
  double l1_oracle = 0.0;     ///< IST; taken from x_true when 0
};

struct RunConfig {
  ProblemSection problem;
  RunSection run;
  SolverSection solver;
  IihtSection iiht;
  double iht_tau = 0.5;
  double ist_tau = 0.3;
  PhantomSection phantom;
  VerifySection verify;
  SolveSection solve;
  std::string gen_format = "bin";  ///< bin | csv
};

/// Reads `key = value` lines grouped in [sections]. Unknown sections or keys
/// and unparsable values throw ConfigError naming the key.
RunConfig load_config(const std::filesystem::path& path);

/// Applies one `section.key` assignment; used by the loader and tests.
void set_config_value(RunConfig& config, const std::string& dotted_key, const std::string& value);

/// Example config with every key set to its default.
std::string default_config_text();

std::vector<double> parse_double_list(const std::string& text);
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

/// Settings for `method` built from the [solver], [iiht], [iht] and [ist] sections.
MethodSettings method_settings(const RunConfig& config, Method method, double mu);

}  // namespace l0recov::cli
