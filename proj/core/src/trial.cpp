#include "l0recov/trial.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <stdexcept>
#include <thread>

#include "l0recov/matrix_io.hpp"
#include "l0recov/solvers.hpp"

namespace l0recov {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Measurement: return "Measurement";
    case Method::Ist: return "IST";
    case Method::Cosamp: return "CoSaMP";
    case Method::Iht: return "IHT";
    case Method::Iiht: return "IIHT";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "measurement" || lower == "direct") return Method::Measurement;
  if (lower == "ist") return Method::Ist;
  if (lower == "cosamp") return Method::Cosamp;
  if (lower == "iht") return Method::Iht;
  if (lower == "iiht") return Method::Iiht;
  throw std::invalid_argument("unknown solver '" + std::string(text) + "'");
}

std::vector<Method> parse_method_list(std::string_view text) {
  std::vector<Method> methods;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (!item.empty()) methods.push_back(parse_method(item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return methods;
}

MethodSettings default_settings(Method method, double mu, double tol, std::size_t max_iters) {
  MethodSettings s;
  s.method = method;
  s.config.mu = mu;
  s.config.tol = tol;
  s.config.max_iters = max_iters;
  s.config.init_mode = InitMode::AdjointMeasurement;
  switch (method) {
    case Method::Ist: s.config.step_rule = FixedStep{0.3}; break;
    case Method::Iht: s.config.step_rule = FixedStep{0.5}; break;
    default: s.config.step_rule = PaperAdaptiveStep{}; break;
  }
  return s;
}

SolveResult solve_with(const DenseMatrix& a, std::span<const double> y, const MethodSettings& settings,
                       double l1_oracle) {
  const SolverConfig& config = settings.config;
  switch (settings.method) {
    case Method::Measurement: {
      SolveResult r;
      r.x = direct_recover(a, y);
      r.stop_reason = StopReason::Tolerance;
      return r;
    }
    case Method::Ist: return ist_solve(a, y, config, l1_oracle);
    case Method::Cosamp: return cosamp_solve(a, y, config);
    case Method::Iht: return iht_solve(a, y, config);
    case Method::Iiht: return iiht_solve(a, y, config);
  }
  throw std::logic_error("solve_with: unhandled method");
}

std::vector<TrialCell> run_trial(const GeneratedProblem& problem, std::span<const MethodSettings> methods,
                                 const TrialOptions& options) {
  std::vector<TrialCell> cells;
  cells.reserve(methods.size());
  for (const MethodSettings& settings : methods) {
    TrialCell cell;
    cell.method = settings.method;
    try {
      const auto start = std::chrono::steady_clock::now();
      MethodSettings resolved = settings;
      if (resolved.config.sparsity_k == 0) resolved.config.sparsity_k = problem.k;
      SolveResult result = solve_with(problem.a, problem.y, resolved, norm1(problem.x_true));
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      MetricsReport report;
      report.rel_err_percent = rel_err(result.x, problem.x_true);
      report.psnr_db = psnr(result.x, problem.x_true);
      report.iterations = result.iterations;
      report.stop_reason = result.stop_reason;
      report.wall_time_seconds = elapsed.count();
      cell.report = report;
      if (options.keep_solutions) cell.x = std::move(result.x);
      if (options.keep_traces) cell.trace = std::move(result.trace);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

std::vector<TrialCell> run_trial(const ProblemSpec& spec, std::span<const MethodSettings> methods,
                                 const TrialOptions& options) {
  if (methods.empty()) return {};
  return run_trial(generate_problem(spec), methods, options);
}

std::pair<double, double> mean_and_std(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

std::vector<TableRow> run_bench(const BenchPlan& plan) {
  if (plan.methods.empty() || plan.levels.empty() || plan.seeds.empty()) return {};
  plan.problem.validate();

  const std::size_t n_seeds = plan.seeds.size();
  const std::size_t n_jobs = plan.levels.size() * n_seeds;
  std::vector<std::vector<TrialCell>> results(n_jobs);

  const auto run_job = [&](std::size_t job) {
    const NoiseLevel& level = plan.levels[job / n_seeds];
    ProblemSpec spec = plan.problem;
    spec.noise_sigma = level.sigma;
    spec.seed = plan.seeds[job % n_seeds];
    std::vector<MethodSettings> methods = plan.methods;
    for (MethodSettings& m : methods) m.config.mu = level.mu;
    try {
      results[job] = run_trial(spec, methods);
    } catch (const std::exception& e) {
      std::vector<TrialCell> failed(methods.size());
      for (std::size_t i = 0; i < methods.size(); ++i) {
        failed[i].method = methods[i].method;
        failed[i].error = e.what();
      }
      results[job] = std::move(failed);
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(plan.parallel, 1, n_jobs);
  if (workers == 1) {
    for (std::size_t job = 0; job < n_jobs; ++job) run_job(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t job = next.fetch_add(1); job < n_jobs; job = next.fetch_add(1)) run_job(job);
      });
    }
  }

  std::vector<TableRow> rows;
  for (std::size_t l = 0; l < plan.levels.size(); ++l) {
    for (std::size_t m = 0; m < plan.methods.size(); ++m) {
      TableRow row;
      row.method = plan.methods[m].method;
      row.sigma = plan.levels[l].sigma;
      row.mu = plan.levels[l].mu;
      std::vector<double> errs, psnrs, iters, times;
      for (std::size_t s = 0; s < n_seeds; ++s) {
        const TrialCell& cell = results[l * n_seeds + s][m];
        if (cell.report) {
          errs.push_back(cell.report->rel_err_percent);
          psnrs.push_back(cell.report->psnr_db);
          iters.push_back(static_cast<double>(cell.report->iterations));
          times.push_back(cell.report->wall_time_seconds);
        } else {
          if (row.failures++ == 0) row.first_error = cell.error;
        }
      }
      row.trials = errs.size();
      std::tie(row.rel_err_mean, row.rel_err_std) = mean_and_std(errs);
      std::tie(row.psnr_mean, row.psnr_std) = mean_and_std(psnrs);
      row.iters_mean = mean_and_std(iters).first;
      row.time_mean_s = mean_and_std(times).first;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

PhantomStudy run_phantom_study(const PhantomSpec& spec) {
  std::vector<MethodSettings> settings;
  for (Method method : spec.methods) {
    MethodSettings s = default_settings(method, spec.mu, spec.tol, spec.max_iters);
    if (method == Method::Iht) s.config.step_rule = FixedStep{spec.iht_tau};
    if (method == Method::Ist) s.config.step_rule = FixedStep{spec.ist_tau};
    settings.push_back(s);
  }
  return run_phantom_study(spec, settings);
}

PhantomStudy run_phantom_study(const PhantomSpec& spec, std::span<const MethodSettings> settings) {
  RngStream rng(spec.seed);
  PhantomStudy study;
  study.phantom = ellipse_phantom(spec.side, spec.target_nnz, rng);
  const GeneratedProblem problem =
      measure_signal(study.phantom, spec.sampling_ratio, spec.noise_sigma, spec.scaling, rng);
  study.measurements = problem.y.size();
  study.cells = run_trial(problem, settings, TrialOptions{.keep_solutions = true, .keep_traces = true});
  return study;
}

void write_trace_csv(std::ostream& out, const SolveTrace& trace) {
  out << "k,tau_k,objective_l1,step_norm_sq,cum_step_sum,residual_norm_sq,nnz\n";
  for (const TraceRecord& r : trace) {
    out << r.k << ',' << format_double_exact(r.tau) << ',' << format_double_exact(r.objective_l1) << ','
        << format_double_exact(r.step_norm_sq) << ',' << format_double_exact(r.cum_step_sum) << ','
        << format_double_exact(r.residual_norm_sq) << ',' << r.nnz << '\n';
  }
}

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_safe(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

}  // namespace

void write_table_csv(std::ostream& out, std::span<const TableRow> rows, bool include_timing) {
  out << "solver,sigma,mu,rel_err_mean,rel_err_std,psnr_mean,psnr_std,iters_mean,time_mean_s\n";
  for (const TableRow& r : rows) {
    out << to_string(r.method) << ',' << fmt6(r.sigma) << ',' << fmt6(r.mu) << ',';
    if (r.trials == 0) {
      out << "error: " << csv_safe(r.first_error) << ",,,,,\n";
      continue;
    }
    out << fmt6(r.rel_err_mean) << ',' << fmt6(r.rel_err_std) << ',' << fmt6(r.psnr_mean) << ','
        << fmt6(r.psnr_std) << ',' << fmt6(r.iters_mean) << ','
        << fmt6(include_timing ? r.time_mean_s : 0.0) << '\n';
  }
}

}  // namespace l0recov
