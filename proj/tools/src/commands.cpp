#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "l0recov/matrix_io.hpp"
#include "l0recov/metrics.hpp"
#include "l0recov/operators.hpp"
#include "l0recov/pgm.hpp"
#include "l0recov/solvers.hpp"
#include "l0recov/trial.hpp"
#include "l0recov/verify.hpp"

namespace l0recov::cli {

namespace {

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

class Log {
 public:
  explicit Log(int verbosity) : verbosity_(verbosity) {}

  void info(const std::string& line) const {
    if (verbosity_ >= 1) std::cerr << line << '\n';
  }

  /// One line per 10 iterations (every iteration at verbosity 2).
  void trace(std::string_view label, const SolveTrace& trace) const {
    if (verbosity_ < 1) return;
    const std::size_t every = verbosity_ >= 2 ? 1 : 10;
    for (const TraceRecord& r : trace) {
      if (r.k % every != 0 && &r != &trace.back()) continue;
      std::cerr << fmt("%.*s k=%zu L1=%.6g residual=%.6g nnz=%zu", static_cast<int>(label.size()), label.data(),
                       r.k, r.objective_l1, std::sqrt(r.residual_norm_sq), r.nnz)
                << '\n';
    }
  }

 private:
  int verbosity_;
};

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError(dir.string() + ": cannot create output directory");
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text;
  if (!out) throw IoError(path.string() + ": write failed");
}

std::vector<NoiseLevel> noise_levels(const ProblemSection& p) {
  if (p.mus.size() != p.sigmas.size() && p.mus.size() != 1) {
    throw ConfigError("problem.mu must list one value or one per sigma (" + std::to_string(p.sigmas.size()) +
                      ")");
  }
  std::vector<NoiseLevel> levels;
  for (std::size_t i = 0; i < p.sigmas.size(); ++i) {
    levels.push_back({p.sigmas[i], p.mus.size() == 1 ? p.mus[0] : p.mus[i]});
  }
  return levels;
}

ProblemSpec problem_spec(const ProblemSection& p) {
  ProblemSpec spec;
  spec.n = p.n;
  spec.sampling_ratio = p.sr;
  spec.sparsity_level = p.sl;
  spec.scaling = p.scaling;
  spec.amplitude = p.amplitude;
  return spec;
}

std::string summary_table(const std::vector<TableRow>& rows) {
  std::ostringstream out;
  out << fmt("%-12s %7s %8s %22s %20s %8s %10s %s\n", "solver", "sigma", "mu", "Rel.Err % (mean+-std)",
             "PSNR dB (mean+-std)", "iters", "time s", "failures");
  for (const TableRow& r : rows) {
    const std::string name(to_string(r.method));
    if (r.trials == 0) {
      out << fmt("%-12s %7.3g %8.4g  all trials failed: %s\n", name.c_str(), r.sigma, r.mu, r.first_error.c_str());
      continue;
    }
    out << fmt("%-12s %7.3g %8.4g %12.4f +- %-7.3f %10.3f +- %-6.3f %8.1f %10.3f %zu\n", name.c_str(), r.sigma,
               r.mu, r.rel_err_mean, r.rel_err_std, r.psnr_mean, r.psnr_std, r.iters_mean, r.time_mean_s,
               r.failures);
    if (r.failures > 0) out << "  first error: " << r.first_error << '\n';
  }
  return out.str();
}

}  // namespace

int cmd_bench(const RunConfig& config) {
  const Log log(config.run.verbosity);
  BenchPlan plan;
  plan.problem = problem_spec(config.problem);
  plan.problem.validate();
  plan.levels = noise_levels(config.problem);
  plan.seeds = config.run.seeds;
  plan.parallel = config.run.parallel;
  for (Method m : config.solver.solvers) plan.methods.push_back(method_settings(config, m, 0.0));
  ensure_dir(config.run.out);

  log.info(fmt("bench: N=%zu M=%zu K=%zu, %zu noise levels x %zu seeds x %zu solvers, %zu worker(s)",
               plan.problem.n, plan.problem.m(), plan.problem.k(), plan.levels.size(), plan.seeds.size(),
               plan.methods.size(), plan.parallel));
  const auto start = std::chrono::steady_clock::now();
  const std::vector<TableRow> rows = run_bench(plan);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  std::ostringstream csv;
  write_table_csv(csv, rows, config.run.timing);
  write_text(config.run.out / "table.csv", csv.str());
  const std::string summary = summary_table(rows) + fmt("wall time %.2f s\n", elapsed.count());
  write_text(config.run.out / "summary.txt", summary);
  std::cout << summary;
  log.info("wrote " + (config.run.out / "table.csv").string());
  return kExitOk;
}

int cmd_phantom(const RunConfig& config) {
  const Log log(config.run.verbosity);
  PhantomSpec spec;
  spec.side = config.phantom.side;
  spec.target_nnz = config.phantom.nnz;
  spec.sampling_ratio = config.phantom.sr;
  spec.noise_sigma = config.phantom.sigma;
  spec.mu = config.phantom.mu;
  spec.tol = config.solver.tol;
  spec.max_iters = config.phantom.max_iters;
  spec.seed = config.phantom.seed;
  spec.scaling = config.problem.scaling;
  RunConfig solver_config = config;
  solver_config.solver.max_iters = config.phantom.max_iters;
  std::vector<MethodSettings> settings;
  for (Method m : config.solver.solvers) settings.push_back(method_settings(solver_config, m, spec.mu));
  ensure_dir(config.run.out);

  log.info(fmt("phantom: %zux%zu, %zu nonzero pixels, SR=%.3g, sigma=%.3g, mu=%.4g", spec.side, spec.side,
               spec.target_nnz, spec.sampling_ratio, spec.noise_sigma, spec.mu));
  const PhantomStudy study = run_phantom_study(spec, settings);
  const double peak = max_abs(study.phantom);
  const auto& out = config.run.out;
  write_pgm(out / "phantom.pgm", study.phantom, spec.side, spec.side, peak);
  write_vector(out / "phantom.bin", study.phantom);

  std::ostringstream metrics;
  metrics << "solver,rel_err_percent,psnr_db,iterations,stop_reason,time_s\n";
  for (const TrialCell& cell : study.cells) {
    const std::string name(to_string(cell.method));
    if (!cell.report) {
      metrics << name << ",error: " << cell.error << ",,,,\n";
      log.info(name + " failed: " + cell.error);
      continue;
    }
    log.trace(name, cell.trace);
    Vector diff(cell.x.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = std::abs(cell.x[i] - study.phantom[i]);
    write_pgm(out / (name + ".pgm"), cell.x, spec.side, spec.side, peak);
    write_pgm(out / (name + "_diff.pgm"), diff, spec.side, spec.side, peak);
    write_vector(out / (name + ".bin"), cell.x);
    std::ostringstream trace;
    write_trace_csv(trace, cell.trace);
    write_text(out / (name + "_trace.csv"), trace.str());
    const MetricsReport& r = *cell.report;
    metrics << name << ',' << fmt("%.6g,%.6g,%zu,", r.rel_err_percent, r.psnr_db, r.iterations)
            << to_string(r.stop_reason) << ',' << fmt("%.6g", config.run.timing ? r.wall_time_seconds : 0.0)
            << '\n';
    std::cout << fmt("%-12s Rel.Err %9.4f %%  PSNR %8.3f dB  iters %4zu  (%s, %.1f s)\n", name.c_str(),
                     r.rel_err_percent, r.psnr_db, r.iterations, std::string(to_string(r.stop_reason)).c_str(),
                     r.wall_time_seconds);
  }
  write_text(out / "phantom_metrics.csv", metrics.str());
  log.info("wrote images and phantom_metrics.csv to " + out.string());
  return kExitOk;
}

namespace {

struct VerifyInstance {
  std::string label;
  DenseMatrix a;
  Vector y;
  InitMode init = InitMode::Zero;
};

}  // namespace

int cmd_verify(const RunConfig& config) {
  const Log log(config.run.verbosity);
  const VerifySection& v = config.verify;
  ensure_dir(config.run.out);
  std::vector<VerifyInstance> instances;
  for (std::size_t n : v.sizes) {
    for (double sigma : v.sigmas) {
      for (std::size_t i = 0; i < v.instances; ++i) {
        ProblemSpec spec = problem_spec(config.problem);
        spec.n = n;
        spec.sampling_ratio = v.sr;
        spec.sparsity_level = v.sl;
        spec.noise_sigma = sigma;
        spec.seed = i < config.run.seeds.size() ? config.run.seeds[i] : i + 1;
        GeneratedProblem p = generate_problem(spec);
        for (InitMode init : {InitMode::Zero, InitMode::AdjointMeasurement}) {
          instances.push_back({fmt("n=%zu sigma=%g seed=%llu init=%s", n, sigma,
                                   static_cast<unsigned long long>(spec.seed),
                                   std::string(to_string(init)).c_str()),
                               p.a, p.y, init});
        }
      }
    }
  }
  if (v.include_special) {
    ProblemSpec spec = problem_spec(config.problem);
    spec.n = 256;
    spec.sampling_ratio = v.sr;
    spec.sparsity_level = v.sl;
    GeneratedProblem p = generate_problem(spec);
    instances.push_back({"n=256 y=0", p.a, Vector(p.y.size(), 0.0), InitMode::Zero});

    RngStream rng(0x0F7405);
    DenseMatrix q = random_orthogonal(64, rng);
    Vector y = l0recov::apply(q, gen_sparse_signal(64, 6, rng));
    const Vector e = gen_noise(y, 0.1, rng);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += e[i];
    instances.push_back({"n=64 orthogonal", std::move(q), std::move(y), InitMode::Zero});
  }

  std::ostringstream text;
  std::ostringstream csv;
  csv << "instance,check,status,margin,failing_iteration,iterations\n";
  std::size_t failed_instances = 0;
  for (const VerifyInstance& inst : instances) {
    const double norm_sq = spectral_norm_sq(inst.a).value;
    SolverConfig sc;
    sc.mu = v.mu;
    sc.tol = config.solver.tol;
    sc.max_iters = v.max_iters;
    sc.init_mode = inst.init;
    sc.spectral_norm_sq = norm_sq;
    if (v.tau_scale == 1.0) {
      sc.step_rule = SafeBoundStep{.delta = 0.0, .delta_fraction = v.delta_fraction};
    } else {
      sc.step_rule = FixedStep{v.tau_scale / (norm_sq * (1.0 + v.delta_fraction))};
    }
    const VerificationReport report = verify_theorems(inst.a, inst.y, sc);
    text << "== " << inst.label << '\n';
    print_report(text, report);
    for (const CheckResult& c : report.checks) {
      csv << inst.label << ',' << c.name << ',' << to_string(c.status) << ',' << fmt("%.6g", c.margin) << ','
          << (c.failing_iteration ? std::to_string(*c.failing_iteration) : std::string()) << ','
          << report.iterations << '\n';
    }
    if (!report.passed()) ++failed_instances;
    log.info(fmt("%-40s %s (%zu iterations)", inst.label.c_str(), report.passed() ? "pass" : "FAIL",
                 report.iterations));
  }
  const std::string verdict =
      fmt("%zu instances, %zu with failing checks\n", instances.size(), failed_instances);
  text << verdict;
  write_text(config.run.out / "verify_report.txt", text.str());
  write_text(config.run.out / "verify.csv", csv.str());
  if (config.run.verbosity >= 2) std::cout << text.str();
  std::cout << verdict;
  return failed_instances == 0 ? kExitOk : kExitVerifyFailed;
}

int cmd_solve(const RunConfig& config) {
  const Log log(config.run.verbosity);
  const SolveSection& s = config.solve;
  if (s.a.empty() || s.y.empty()) throw ConfigError("solve needs both solve.a and solve.y (--a, --y)");
  const DenseMatrix a = read_matrix(s.a);
  const Vector y = read_vector(s.y);
  if (y.size() != a.rows()) {
    throw ConfigError(fmt("dimension mismatch: A is %zu x %zu but y has %zu entries", a.rows(), a.cols(),
                          y.size()));
  }
  Vector x_true;
  if (!s.x_true.empty()) {
    x_true = read_vector(s.x_true);
    if (x_true.size() != a.cols()) {
      throw ConfigError(fmt("dimension mismatch: A has %zu columns but x_true has %zu entries", a.cols(),
                            x_true.size()));
    }
  }

  MethodSettings settings = method_settings(config, s.solver, s.mu);
  settings.config.sparsity_k = s.k != 0 ? s.k : count_nonzero(x_true);
  const double oracle = s.l1_oracle > 0.0 ? s.l1_oracle : norm1(x_true);
  ensure_dir(config.run.out);

  const std::string name(to_string(s.solver));
  log.info(fmt("solve: %s on A %zu x %zu", name.c_str(), a.rows(), a.cols()));
  const SolveResult result = solve_with(a, y, settings, oracle);
  log.trace(name, result.trace);
  for (const std::string& w : result.warnings) log.info("warning: " + w);

  const std::filesystem::path x_out = s.x_out.empty() ? config.run.out / "x.bin" : s.x_out;
  write_vector(x_out, result.x);
  std::ostringstream trace;
  write_trace_csv(trace, result.trace);
  write_text(config.run.out / "trace.csv", trace.str());

  std::cout << fmt("%s: %zu iterations, stop: %s, nnz %zu", name.c_str(), result.iterations,
                   std::string(to_string(result.stop_reason)).c_str(), count_nonzero(result.x));
  if (!x_true.empty() && norm2(x_true) > 0.0) {
    std::cout << fmt(", Rel.Err %.6g %%, PSNR %.6g dB", rel_err(result.x, x_true), psnr(result.x, x_true));
  }
  std::cout << "\nwrote " << x_out.string() << " and " << (config.run.out / "trace.csv").string() << '\n';
  return kExitOk;
}

int cmd_gen(const RunConfig& config) {
  const Log log(config.run.verbosity);
  if (config.gen_format != "bin" && config.gen_format != "csv") {
    throw ConfigError("gen.format must be bin or csv, got '" + config.gen_format + "'");
  }
  ProblemSpec spec = problem_spec(config.problem);
  spec.noise_sigma = config.problem.sigmas.front();
  spec.seed = config.run.seeds.front();
  const GeneratedProblem p = generate_problem(spec);
  ensure_dir(config.run.out);
  const std::string ext = "." + config.gen_format;
  const auto& out = config.run.out;
  write_matrix(out / ("A" + ext), p.a);
  write_vector(out / ("y" + ext), p.y);
  write_vector(out / ("x_true" + ext), p.x_true);
  write_vector(out / ("y_clean" + ext), p.y_clean);
  write_vector(out / ("noise" + ext), p.noise);
  std::cout << fmt("wrote A (%zu x %zu), y, x_true (K=%zu), y_clean, noise to %s\n", p.a.rows(), p.a.cols(), p.k,
                   out.string().c_str());
  return kExitOk;
}

}  // namespace l0recov::cli
