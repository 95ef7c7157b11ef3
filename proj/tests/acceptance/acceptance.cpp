// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed
// here; `--criterion N` (repeatable) restricts the run.
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "l0recov/dense_matrix.hpp"
#include "l0recov/objective.hpp"
#include "l0recov/operators.hpp"
#include "l0recov/pgm.hpp"
#include "l0recov/problem.hpp"
#include "l0recov/rng.hpp"
#include "l0recov/solvers.hpp"
#include "l0recov/thresholding.hpp"
#include "l0recov/trial.hpp"
#include "l0recov/verify.hpp"

namespace {

using namespace l0recov;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// 1. Theorem suite on 20 instances with tau = 1 / (||A||^2 + delta),
//    delta = 0.01 ||A||^2, x0 = 0.
Outcome theorem_suite() {
  constexpr double kDeltaFraction = 0.01;
  std::size_t instances = 0;
  std::size_t failed = 0;
  std::ostringstream detail;
  for (std::size_t n : {256u, 1024u}) {
    for (double sigma : {0.0, 0.1}) {
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        ProblemSpec spec;
        spec.n = n;
        spec.noise_sigma = sigma;
        spec.seed = seed;
        const GeneratedProblem p = generate_problem(spec);
        const double norm_sq = spectral_norm_sq(p.a).value;
        SolverConfig config;
        config.mu = 350.0;
        config.tol = 1e-5;
        config.max_iters = 10000;
        config.init_mode = InitMode::Zero;
        config.spectral_norm_sq = norm_sq;
        config.step_rule = SafeBoundStep{kDeltaFraction * norm_sq};
        const VerificationReport report = verify_theorems(p.a, p.y, config);
        ++instances;
        for (auto name : {kCheckSurrogateDescent, kCheckObjectiveDescent, kCheckStepSummability,
                          kCheckStepDecay}) {
          const CheckResult* c = report.find(name);
          if (c == nullptr || c->status != CheckStatus::Pass) {
            ++failed;
            detail << " [n=" << n << " sigma=" << sigma << " seed=" << seed << ' ' << name << ']';
          }
        }
      }
    }
  }
  return {failed == 0, fmt("%zu instances, %zu failed checks", instances, failed) + detail.str()};
}

// 2. Grid brute force of phi(a) = ||a||_0 + s (a - b)^2 against hard_scalar(b, sqrt(1/s)).
Outcome threshold_oracle() {
  constexpr double kGridStep = 1e-4;
  RngStream rng(20240601);
  std::size_t mismatches = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double b = -3.0 + 6.0 * rng.uniform();
    const double s = std::pow(10.0, -1.0 + 2.0 * rng.uniform());
    const auto phi = [&](double a) { return (a != 0.0 ? 1.0 : 0.0) + s * (a - b) * (a - b); };
    const long lo = static_cast<long>(std::floor((std::min(0.0, b) - 1.0) / kGridStep));
    const long hi = static_cast<long>(std::ceil((std::max(0.0, b) + 1.0) / kGridStep));
    double best_a = 0.0;
    double best_phi = phi(0.0);
    for (long j = lo; j <= hi; ++j) {
      const double a = static_cast<double>(j) * kGridStep;
      const double v = phi(a);
      if (v < best_phi) {
        best_phi = v;
        best_a = a;
      }
    }
    const double diff = std::abs(best_a - hard_scalar(b, std::sqrt(1.0 / s)));
    worst = std::max(worst, diff);
    if (diff > kGridStep) ++mismatches;
  }
  return {mismatches == 0, fmt("1000 pairs, %zu mismatches, worst |a_grid - hard| = %.3g", mismatches, worst)};
}

// 3. Residual expansion and surrogate identity on 100 random instances.
Outcome identities() {
  constexpr double kRelTol = 1e-10;
  RngStream rng(77);
  double worst_expansion = 0.0;
  double worst_surrogate = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 5 + rng.below(60);
    const std::size_t n = 5 + rng.below(120);
    const DenseMatrix a = gaussian_matrix(m, n, rng);
    Vector y(m), x(n), xk(n);
    for (double& v : y) v = rng.normal();
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform() < 0.3 ? 0.0 : rng.normal();
      xk[i] = rng.uniform() < 0.3 ? 0.0 : rng.normal();
    }
    const double mu = 0.5 + 100.0 * rng.uniform();
    const double tau = 0.01 + rng.uniform();

    const Vector d = subtract(x, xk);
    const Vector rk = subtract(y, l0recov::apply(a, xk));
    const double lhs = norm2_sq(subtract(y, l0recov::apply(a, x)));
    const double rhs = norm2_sq(l0recov::apply(a, d)) - 2.0 * dot(apply_adjoint(a, rk), d) + norm2_sq(rk);
    worst_expansion = std::max(worst_expansion, std::abs(lhs - rhs) / std::abs(lhs));

    const double l2 = surrogate_l2(x, xk, y, a, mu, tau);
    const double l1 = objective_l1(x, y, a, mu);
    const double gap = 0.5 * mu * (norm2_sq(d) / tau - norm2_sq(l0recov::apply(a, d)));
    worst_surrogate = std::max(worst_surrogate, std::abs(l2 - (l1 + gap)) / std::abs(l2));
  }
  const bool pass = worst_expansion <= kRelTol && worst_surrogate <= kRelTol;
  return {pass, fmt("worst relative error: expansion %.3g, surrogate %.3g (tol %.0e)", worst_expansion,
                    worst_surrogate, kRelTol)};
}

std::uint64_t ulp_distance(double a, double b) {
  const auto key = [](double v) {
    const auto bits = std::bit_cast<std::int64_t>(v);
    return bits < 0 ? std::numeric_limits<std::int64_t>::min() - bits : bits;
  };
  const std::int64_t ka = key(a), kb = key(b);
  return ka > kb ? static_cast<std::uint64_t>(ka - kb) : static_cast<std::uint64_t>(kb - ka);
}

// 4. Orthogonal A: one step gives hard(A^T y, sqrt(2/mu)); a second step is a no-op.
Outcome orthogonal_single_step() {
  RngStream rng(4);
  const DenseMatrix q = random_orthogonal(64, rng);
  Vector x_true = gen_sparse_signal(64, 8, rng);
  Vector y = l0recov::apply(q, x_true);
  const Vector noise = gen_noise(y, 0.1, rng);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += noise[i];

  SolverConfig config;
  config.mu = 8.0;
  config.init_mode = InitMode::Zero;
  config.step_rule = FixedStep{1.0};
  config.tol = 0.0;
  config.max_iters = 1;
  const Vector expected = hard_vector(apply_adjoint(q, y), std::sqrt(2.0 / config.mu));
  const SolveResult one = iiht_solve(q, y, config);
  config.max_iters = 2;
  const SolveResult two = iiht_solve(q, y, config);

  const bool step1 = one.x == expected;
  const bool step2 = two.x == one.x;
  std::uint64_t worst_ulps = 0;
  bool same_support = true;
  for (std::size_t i = 0; i < one.x.size(); ++i) {
    worst_ulps = std::max(worst_ulps, ulp_distance(one.x[i], two.x[i]));
    same_support = same_support && ((one.x[i] == 0.0) == (two.x[i] == 0.0));
  }
  return {step1 && step2,
          fmt("step 1 %s; step 2 %s (support %s, max deviation %llu ulp, nnz %zu)",
              step1 ? "exact" : "differs", step2 ? "unchanged" : "changed", same_support ? "same" : "differs",
              static_cast<unsigned long long>(worst_ulps), count_nonzero(one.x))};
}

// 5. Noiseless recovery with the adaptive step.
Outcome noiseless_recovery() {
  constexpr double kMedianBound = 1.0;  // percent
  std::vector<double> errs;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ProblemSpec spec;
    spec.n = 1024;
    spec.sampling_ratio = 0.35;
    spec.sparsity_level = 0.05;
    spec.noise_sigma = 0.0;
    spec.seed = seed;
    const GeneratedProblem p = generate_problem(spec);
    SolverConfig config;
    config.mu = 350.0;
    config.max_iters = 500;
    config.tol = 1e-5;
    config.init_mode = InitMode::AdjointMeasurement;
    config.step_rule = PaperAdaptiveStep{};
    errs.push_back(rel_err(iiht_solve(p.a, p.y, config).x, p.x_true));
  }
  std::sort(errs.begin(), errs.end());
  const double median = 0.5 * (errs[4] + errs[5]);
  return {median < kMedianBound,
          fmt("M=358 K=51, median Rel.Err %.4g%% (bound %.0f%%), range [%.4g, %.4g]", median, kMedianBound,
              errs.front(), errs.back())};
}

BenchPlan table1_plan(std::size_t parallel) {
  BenchPlan plan;
  plan.problem.n = 4096;
  plan.problem.sampling_ratio = 0.35;
  plan.problem.sparsity_level = 0.05;
  plan.levels = {{0.10, 350.0}, {0.20, 170.0}};
  for (std::uint64_t s = 1; s <= 10; ++s) plan.seeds.push_back(s);
  for (Method m : kAllMethods) plan.methods.push_back(default_settings(m, 0.0, 1e-5, 100));
  plan.parallel = parallel;
  return plan;
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream out;
  write_table_csv(out, rows);
  return out.str();
}

// 6. Trend of the noisy comparison table.
Outcome table1_trend() {
  const std::vector<TableRow> rows = run_bench(table1_plan(1));
  std::cout << table_csv(rows);
  bool pass = true;
  std::ostringstream detail;
  for (double sigma : {0.10, 0.20}) {
    const auto mean = [&](Method m) {
      for (const TableRow& r : rows) {
        if (r.method == m && r.sigma == sigma) return r.trials > 0 ? r.rel_err_mean : INFINITY;
      }
      return static_cast<double>(INFINITY);
    };
    const double meas = mean(Method::Measurement), ist = mean(Method::Ist), cos = mean(Method::Cosamp),
                 iht = mean(Method::Iht), iiht = mean(Method::Iiht);
    const double band = sigma < 0.15 ? 10.0 : 15.0;
    const bool a = meas > 100.0;
    const bool b = iiht < band;
    const bool c = iiht <= iht && iiht < cos && cos < ist && ist < meas;
    pass = pass && a && b && c;
    detail << fmt(" sigma=%.0f%%: Meas %.4g IST %.4g CoSaMP %.4g IHT %.4g IIHT %.4g [a:%s b:%s c:%s];",
                  100.0 * sigma, meas, ist, cos, iht, iiht, a ? "ok" : "no", b ? "ok" : "no", c ? "ok" : "no");
  }
  return {pass, detail.str()};
}

// 7. Phantom study.
Outcome phantom_study(const std::filesystem::path& out_dir) {
  const PhantomSpec spec;
  const PhantomStudy study = run_phantom_study(spec);
  std::filesystem::create_directories(out_dir);
  const double peak = max_abs(study.phantom);
  write_pgm(out_dir / "phantom.pgm", study.phantom, spec.side, spec.side, peak);
  double iiht = INFINITY, meas = INFINITY;
  std::size_t images = 0;
  std::ostringstream detail;
  for (const TrialCell& cell : study.cells) {
    const std::string name(to_string(cell.method));
    if (!cell.report) {
      detail << ' ' << name << " error: " << cell.error << ';';
      continue;
    }
    Vector diff(cell.x.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = std::abs(cell.x[i] - study.phantom[i]);
    write_pgm(out_dir / (name + ".pgm"), cell.x, spec.side, spec.side, peak);
    write_pgm(out_dir / (name + "_diff.pgm"), diff, spec.side, spec.side, peak);
    images += 2;
    detail << fmt(" %s %.4g%% (%zu it);", name.c_str(), cell.report->rel_err_percent, cell.report->iterations);
    if (cell.method == Method::Iiht) iiht = cell.report->rel_err_percent;
    if (cell.method == Method::Measurement) meas = cell.report->rel_err_percent;
  }
  bool emitted = true;
  for (Method m : spec.methods) {
    emitted = emitted && std::filesystem::exists(out_dir / (std::string(to_string(m)) + "_diff.pgm"));
  }
  const bool pass = iiht < 20.0 && iiht < meas / 5.0 && emitted;
  return {pass, fmt("IIHT %.4g%% (< 20%%, < %.4g%%), %zu images in %s;", iiht, meas / 5.0, images + 1,
                    out_dir.string().c_str()) +
                    detail.str()};
}

// 8. One apply and one adjoint per IIHT iteration.
Outcome cost_contract() {
  std::size_t iterations = 0;
  std::size_t violations = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    ProblemSpec spec;
    spec.n = 512;
    spec.noise_sigma = 0.1;
    spec.seed = seed;
    const GeneratedProblem p = generate_problem(spec);
    for (int rule = 0; rule < 3; ++rule) {
      SolverConfig config;
      config.mu = 350.0;
      config.max_iters = 60;
      config.tol = 0.0;
      config.init_mode = seed % 2 ? InitMode::Zero : InitMode::AdjointMeasurement;
      if (rule == 1) config.step_rule = FixedStep{0.2};
      if (rule == 2) config.step_rule = SafeBoundStep{0.5};
      const OperatorCounts before = operator_counts();
      const SolveResult r = iiht_solve(p.a, p.y, config);
      const OperatorCounts after = operator_counts();
      std::uint64_t traced_applies = 0, traced_adjoints = 0;
      for (const TraceRecord& rec : r.trace) {
        traced_applies += rec.applies;
        traced_adjoints += rec.adjoints;
        if (rec.k == 0) continue;
        ++iterations;
        if (rec.applies != 1 || rec.adjoints != 1) ++violations;
      }
      // The trace must account for every counted call, power iteration included.
      if (traced_applies != after.apply - before.apply || traced_adjoints != after.adjoint - before.adjoint) {
        ++violations;
      }
    }
  }
  return {violations == 0 && iterations > 0,
          fmt("%zu iterations checked, %zu violations", iterations, violations)};
}

// 9. Table CSV is byte-identical across runs and worker counts.
Outcome determinism() {
  const std::string first = table_csv(run_bench(table1_plan(1)));
  const std::string second = table_csv(run_bench(table1_plan(1)));
  const std::string parallel = table_csv(run_bench(table1_plan(4)));
  const bool pass = first == second && first == parallel && !first.empty();
  return {pass, fmt("repeat run %s, 4 workers %s (%zu bytes)", first == second ? "identical" : "differs",
                    first == parallel ? "identical" : "differs", first.size())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l0recov acceptance suite"};
  std::vector<int> selected;
  std::filesystem::path out_dir = "acceptance_out";
  app.add_option("-c,--criterion", selected, "Criterion number(s) to run (default: all)")->check(CLI::Range(1, 9));
  app.add_option("--out-dir", out_dir, "Directory for phantom images");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"theorem suite", theorem_suite},
      {"hard-threshold oracle", threshold_oracle},
      {"expansion and surrogate identities", identities},
      {"orthogonal single step", orthogonal_single_step},
      {"noiseless recovery", noiseless_recovery},
      {"noisy comparison trend", table1_trend},
      {"phantom study", [&] { return phantom_study(out_dir); }},
      {"cost contract", cost_contract},
      {"determinism", determinism},
  };
  const std::set<int> wanted(selected.begin(), selected.end());
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!wanted.empty() && !wanted.contains(number)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const std::chrono::duration<double> secs = std::chrono::steady_clock::now() - start;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << number << " (" << criteria[i].first
              << ", " << fmt("%.1f", secs.count()) << " s): " << outcome.detail << std::endl;
    if (!outcome.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
