#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "l0recov/metrics.hpp"
#include "l0recov/phantom.hpp"
#include "l0recov/problem.hpp"
#include "l0recov/trial.hpp"

using namespace l0recov;

TEST(ProblemSpec, RoundsHalfUp) {
  ProblemSpec spec;
  spec.n = 1024;
  spec.sampling_ratio = 0.35;
  spec.sparsity_level = 0.05;
  EXPECT_EQ(spec.m(), 358u);  // 358.4
  EXPECT_EQ(spec.k(), 51u);   // 51.2
  spec.n = 10;
  spec.sparsity_level = 0.25;
  EXPECT_EQ(spec.k(), 3u);  // 2.5 rounds up
  spec.sparsity_level = 0.01;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(SparseSignal, ExactSparsity) {
  RngStream rng(1);
  EXPECT_EQ(count_nonzero(gen_sparse_signal(10, 10, rng)), 10u);
  EXPECT_EQ(count_nonzero(gen_sparse_signal(10, 1, rng)), 1u);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(300);
    const std::size_t k = 1 + rng.below(n);
    EXPECT_EQ(count_nonzero(gen_sparse_signal(n, k, rng)), k);
  }
  EXPECT_THROW(gen_sparse_signal(5, 6, rng), std::invalid_argument);
}

TEST(SparseSignal, SpikeAmplitudes) {
  RngStream rng(2);
  for (double v : gen_sparse_signal(50, 20, rng, AmplitudeKind::Spike)) EXPECT_TRUE(v == 0.0 || std::abs(v) == 1.0);
}

TEST(Noise, ZeroSigmaGivesZeros) {
  RngStream rng(1);
  EXPECT_EQ(gen_noise(Vector{1.0, 2.0, 3.0}, 0.0, rng), Vector(3, 0.0));
}

TEST(Noise, ScaleIsSigmaTimesMeanMagnitude) {
  // y = (1, -1): mean magnitude 1, so the output is sigma * g with the same draws.
  RngStream a(5), b(5);
  const Vector e = gen_noise(Vector{1.0, -1.0}, 0.3, a);
  EXPECT_DOUBLE_EQ(e[0], 0.3 * b.normal());
  EXPECT_DOUBLE_EQ(e[1], 0.3 * b.normal());
}

TEST(Noise, Statistics) {
  RngStream rng(9);
  Vector y(20000);
  for (double& v : y) v = rng.normal();
  const double sigma = 0.1;
  const double scale = sigma * norm1(y) / static_cast<double>(y.size());
  const Vector e = gen_noise(y, sigma, rng);
  double s1 = 0.0, s2 = 0.0;
  for (double v : e) {
    s1 += std::abs(v);
    s2 += v * v;
  }
  const double n = static_cast<double>(e.size());
  EXPECT_NEAR(std::sqrt(s2 / n) / scale, 1.0, 0.05);
  EXPECT_NEAR(s1 / n / scale, std::sqrt(2.0 / std::numbers::pi), 0.02);
}

TEST(Problem, ReproducibleAndConsistent) {
  ProblemSpec spec;
  spec.n = 300;
  spec.noise_sigma = 0.1;
  spec.seed = 17;
  const GeneratedProblem a = generate_problem(spec);
  const GeneratedProblem b = generate_problem(spec);
  EXPECT_EQ(a.a, b.a);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(count_nonzero(a.x_true), spec.k());
  for (std::size_t i = 0; i < a.y.size(); ++i) EXPECT_EQ(a.y[i], a.y_clean[i] + a.noise[i]);
  spec.seed = 18;
  EXPECT_NE(generate_problem(spec).y, a.y);
}

TEST(Phantom, ExactPixelCount) {
  RngStream rng(1);
  const Vector img = ellipse_phantom(128, 1282, rng);
  ASSERT_EQ(img.size(), 128u * 128u);
  EXPECT_EQ(count_nonzero(img), 1282u);
  EXPECT_NEAR(1282.0 / (128.0 * 128.0), 0.0783, 1e-4);
  for (double v : img) EXPECT_TRUE(v == 0.0 || (v >= 0.5 && v < 1.0));
}

TEST(Phantom, EdgeCasesAndDeterminism) {
  RngStream a(3), b(3);
  EXPECT_EQ(ellipse_phantom(8, 0, a), Vector(64, 0.0));
  EXPECT_EQ(ellipse_phantom(64, 300, a), ellipse_phantom(64, 300, b));
  RngStream c(4);
  EXPECT_THROW(ellipse_phantom(8, 65, c), std::invalid_argument);
  EXPECT_THROW(ellipse_phantom(8, 64, c), std::invalid_argument);  // outlines never fill every pixel
}

TEST(Metrics, RelativeError) {
  const Vector x{1.0, -2.0, 0.0, 2.0};
  EXPECT_DOUBLE_EQ(rel_err(x, x), 0.0);
  EXPECT_DOUBLE_EQ(rel_err(Vector(4, 0.0), x), 100.0);
  EXPECT_DOUBLE_EQ(rel_err(Vector{2.0, -4.0, 0.0, 4.0}, x), 100.0);
  const Vector d{0.1, 0.0, -0.2, 0.0};
  Vector x1 = x, x2 = x;
  for (std::size_t i = 0; i < 4; ++i) {
    x1[i] += d[i];
    x2[i] += 2.0 * d[i];
  }
  EXPECT_NEAR(rel_err(x2, x), 2.0 * rel_err(x1, x), 1e-12);
  EXPECT_THROW(rel_err(x, Vector(4, 0.0)), std::invalid_argument);
}

TEST(Metrics, Psnr) {
  const Vector x{1.0, -2.0, 0.0, 2.0};
  EXPECT_TRUE(std::isinf(psnr(x, x)));
  const Vector far{1.5, -2.0, 0.0, 2.0};
  const Vector near{1.25, -2.0, 0.0, 2.0};
  EXPECT_NEAR(psnr(near, x) - psnr(far, x), 20.0 * std::log10(2.0), 1e-12);
  // 10 log10(4 * 2^2 / 0.25)
  EXPECT_NEAR(psnr(far, x), 10.0 * std::log10(64.0), 1e-12);
  EXPECT_GT(psnr(near, x), psnr(far, x));
  EXPECT_LT(rel_err(near, x), rel_err(far, x));
}

TEST(Trial, EmptySolverListGivesEmptyTable) {
  ProblemSpec spec;
  spec.n = 64;
  EXPECT_TRUE(run_trial(spec, {}).empty());
  BenchPlan plan;
  plan.problem = spec;
  plan.levels = {{0.1, 350.0}};
  plan.seeds = {1};
  EXPECT_TRUE(run_bench(plan).empty());
}

TEST(Trial, NoiselessIihtRecovery) {
  ProblemSpec spec;
  spec.n = 1024;
  spec.sampling_ratio = 0.5;
  spec.sparsity_level = 0.02;
  spec.noise_sigma = 0.0;
  const std::vector<MethodSettings> methods{default_settings(Method::Iiht, 350.0)};
  const std::vector<TrialCell> cells = run_trial(spec, methods);
  ASSERT_TRUE(cells[0].report.has_value()) << cells[0].error;
  EXPECT_LT(cells[0].report->rel_err_percent, 0.1);
}

TEST(Trial, SolverErrorsAreRecordedPerCell) {
  ProblemSpec spec;
  spec.n = 128;
  spec.noise_sigma = 0.1;
  MethodSettings bad = default_settings(Method::Iht, 350.0);
  bad.config.step_rule = PaperAdaptiveStep{};  // IHT needs a fixed step
  const std::vector<MethodSettings> methods{default_settings(Method::Measurement, 350.0), bad};
  const std::vector<TrialCell> cells = run_trial(spec, methods);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_TRUE(cells[0].report.has_value());
  EXPECT_FALSE(cells[1].report.has_value());
  EXPECT_FALSE(cells[1].error.empty());
}

TEST(Trial, MeanAndSampleStd) {
  const Vector v{1.0, 2.0, 3.0, 4.0};
  const auto [mean, sd] = mean_and_std(v);
  EXPECT_DOUBLE_EQ(mean, 2.5);
  EXPECT_DOUBLE_EQ(sd, std::sqrt(5.0 / 3.0));
  EXPECT_EQ(mean_and_std(Vector{7.0}).second, 0.0);
}

TEST(Bench, TableShapeAndParallelDeterminism) {
  BenchPlan plan;
  plan.problem.n = 256;
  plan.levels = {{0.1, 350.0}, {0.2, 170.0}};
  plan.seeds = {1, 2, 3};
  for (Method m : kAllMethods) plan.methods.push_back(default_settings(m, 0.0));
  const auto csv = [&](std::size_t workers) {
    plan.parallel = workers;
    std::ostringstream out;
    write_table_csv(out, run_bench(plan));
    return out.str();
  };
  const std::string serial = csv(1);
  EXPECT_EQ(serial, csv(1));
  EXPECT_EQ(serial, csv(3));
  std::istringstream lines(serial);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "solver,sigma,mu,rel_err_mean,rel_err_std,psnr_mean,psnr_std,iters_mean,time_mean_s");
  std::vector<std::string> names;
  while (std::getline(lines, line)) names.push_back(line.substr(0, line.find(',')));
  EXPECT_EQ(names, (std::vector<std::string>{"Measurement", "IST", "CoSaMP", "IHT", "IIHT", "Measurement", "IST",
                                             "CoSaMP", "IHT", "IIHT"}));
}

TEST(Bench, TableCsvFormatting) {
  TableRow row;
  row.method = Method::Iht;
  row.sigma = 0.1;
  row.mu = 350.0;
  row.trials = 2;
  row.rel_err_mean = 3.14159265;
  row.rel_err_std = 0.5;
  row.psnr_mean = 40.0;
  row.psnr_std = 1.0 / 3.0;
  row.iters_mean = 57.5;
  row.time_mean_s = 0.25;
  TableRow failed;
  failed.method = Method::Cosamp;
  failed.first_error = "bad, config";
  const std::vector<TableRow> rows{row, failed};
  std::ostringstream plain, timed;
  write_table_csv(plain, rows);
  write_table_csv(timed, rows, true);
  EXPECT_NE(plain.str().find("IHT,0.1,350,3.14159,0.5,40,0.333333,57.5,0\n"), std::string::npos);
  EXPECT_NE(timed.str().find(",57.5,0.25\n"), std::string::npos);
  EXPECT_NE(plain.str().find("CoSaMP,0,0,error: bad; config,,,,,\n"), std::string::npos);
}

TEST(Methods, ParseNames) {
  EXPECT_EQ(parse_method("IIHT"), Method::Iiht);
  EXPECT_EQ(parse_method("direct"), Method::Measurement);
  EXPECT_EQ(parse_method_list("iht, cosamp"), (std::vector<Method>{Method::Iht, Method::Cosamp}));
  EXPECT_THROW(parse_method("omp"), std::invalid_argument);
}
