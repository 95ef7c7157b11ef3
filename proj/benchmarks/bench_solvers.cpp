#include <benchmark/benchmark.h>

#include "l0recov/problem.hpp"
#include "l0recov/trial.hpp"

namespace {

using namespace l0recov;

const GeneratedProblem& problem() {
  static const GeneratedProblem p = [] {
    ProblemSpec spec;
    spec.n = 1024;
    spec.noise_sigma = 0.1;
    return generate_problem(spec);
  }();
  return p;
}

void BM_Solver(benchmark::State& state, Method method) {
  const GeneratedProblem& p = problem();
  MethodSettings settings = default_settings(method, 350.0);
  settings.config.sparsity_k = p.k;
  const double oracle = norm1(p.x_true);
  for (auto _ : state) benchmark::DoNotOptimize(solve_with(p.a, p.y, settings, oracle));
}
BENCHMARK_CAPTURE(BM_Solver, iiht, Method::Iiht)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solver, iht, Method::Iht)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solver, ist, Method::Ist)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solver, cosamp, Method::Cosamp)->Unit(benchmark::kMillisecond);

}  // namespace
