#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "l0recov/metrics.hpp"
#include "l0recov/phantom.hpp"
#include "l0recov/problem.hpp"
#include "l0recov/solver_config.hpp"

namespace l0recov {

enum class Method { Measurement, Ist, Cosamp, Iht, Iiht };

/// Table order: Measurement, IST, CoSaMP, IHT, IIHT.
inline constexpr std::array<Method, 5> kAllMethods{Method::Measurement, Method::Ist, Method::Cosamp,
                                                   Method::Iht, Method::Iiht};

std::string_view to_string(Method method);
/// Accepts measurement (or direct), ist, cosamp, iht, iiht; case-insensitive.
Method parse_method(std::string_view text);
/// Comma-separated method list, e.g. "iht,iiht". Empty text gives an empty list.
std::vector<Method> parse_method_list(std::string_view text);

struct MethodSettings {
  Method method = Method::Iiht;
  SolverConfig config;
};

/// Defaults used by the experiment runners: IST tau = 0.3, IHT tau = 0.5,
/// IIHT with the adaptive step, all starting from A^T y.
MethodSettings default_settings(Method method, double mu, double tol = 1e-5, std::size_t max_iters = 100);

/// Runs one method on (A, y). A zero sparsity_k must already be resolved for
/// IHT and CoSaMP; `l1_oracle` is used by IST only.
SolveResult solve_with(const DenseMatrix& a, std::span<const double> y, const MethodSettings& settings,
                       double l1_oracle = 0.0);

struct TrialCell {
  Method method = Method::Iiht;
  std::optional<MetricsReport> report;  ///< empty when the solver threw
  std::string error;
  Vector x;           ///< kept only when TrialOptions::keep_solutions
  SolveTrace trace;   ///< kept only when TrialOptions::keep_traces
};

struct TrialOptions {
  bool keep_solutions = false;
  bool keep_traces = false;
};

/// Runs every requested method on the same (A, y, x_true). A zero
/// sparsity_k is replaced by problem.k; IST gets ||x_true||_1 as its oracle.
/// Solver exceptions are captured in the cell.
std::vector<TrialCell> run_trial(const GeneratedProblem& problem, std::span<const MethodSettings> methods,
                                 const TrialOptions& options = {});

/// Generates the problem for `spec`, then runs the overload above.
std::vector<TrialCell> run_trial(const ProblemSpec& spec, std::span<const MethodSettings> methods,
                                 const TrialOptions& options = {});

/// One noise level of a bench run; mu overrides every method's config.mu.
struct NoiseLevel {
  double sigma = 0.1;
  double mu = 350.0;
};

struct BenchPlan {
  ProblemSpec problem;               ///< noise_sigma and seed are taken from levels / seeds
  std::vector<NoiseLevel> levels;
  std::vector<std::uint64_t> seeds;  ///< one trial per seed
  std::vector<MethodSettings> methods;
  std::size_t parallel = 1;          ///< worker count, results do not depend on it
};

struct TableRow {
  Method method = Method::Iiht;
  double sigma = 0.0;
  double mu = 0.0;
  std::size_t trials = 0;    ///< cells that produced a report
  std::size_t failures = 0;  ///< cells that threw
  std::string first_error;
  double rel_err_mean = 0.0;
  double rel_err_std = 0.0;  ///< sample standard deviation; 0 for a single trial
  double psnr_mean = 0.0;
  double psnr_std = 0.0;
  double iters_mean = 0.0;
  double time_mean_s = 0.0;
};

/// Runs every (level, seed) trial and aggregates one row per (level, method),
/// ordered by level and then by plan.methods. Trials run on up to
/// plan.parallel threads and are merged by trial index.
std::vector<TableRow> run_bench(const BenchPlan& plan);

/// Mean and sample standard deviation.
std::pair<double, double> mean_and_std(std::span<const double> values);

/// Ellipse-phantom reconstruction study.
struct PhantomSpec {
  std::size_t side = 128;
  std::size_t target_nnz = 1282;
  double sampling_ratio = 0.35;
  double noise_sigma = 0.08;
  double mu = 256.0;
  double tol = 1e-5;
  std::size_t max_iters = 800;
  double iht_tau = 0.5;
  double ist_tau = 0.3;
  std::uint64_t seed = 1;
  MatrixScaling scaling = MatrixScaling::InvSqrtM;
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
};

struct PhantomStudy {
  Vector phantom;                ///< side x side, row-major
  std::size_t measurements = 0;  ///< M
  std::vector<TrialCell> cells;  ///< one per method, solutions and traces kept
};

/// Draws the phantom and then the measurement from one stream seeded with
/// spec.seed, and runs every method in spec.methods with default_settings
/// (mu, tol, max_iters and the two tau values taken from `spec`).
PhantomStudy run_phantom_study(const PhantomSpec& spec);

/// Same study with caller-supplied method settings; spec.methods is ignored.
PhantomStudy run_phantom_study(const PhantomSpec& spec, std::span<const MethodSettings> settings);

/// Trace CSV: k,tau_k,objective_l1,step_norm_sq,cum_step_sum,residual_norm_sq,nnz
/// with values in shortest round-trip form.
void write_trace_csv(std::ostream& out, const SolveTrace& trace);

/// Writes the table with a header row, 6 significant digits per value.
/// time_mean_s is written as 0 unless include_timing is set, so that the
/// output depends only on the inputs. Rows whose every trial failed carry
/// the error text in the rel_err_mean column.
void write_table_csv(std::ostream& out, std::span<const TableRow> rows, bool include_timing = false);

}  // namespace l0recov
