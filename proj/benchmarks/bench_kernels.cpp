#include <benchmark/benchmark.h>

#include "l0recov/operators.hpp"
#include "l0recov/rng.hpp"
#include "l0recov/solvers.hpp"
#include "l0recov/thresholding.hpp"

namespace {

using namespace l0recov;

struct Fixture {
  DenseMatrix a;
  Vector x, y;

  explicit Fixture(std::size_t n) {
    RngStream rng(1);
    const std::size_t m = (n * 35 + 50) / 100;
    a = gaussian_matrix(m, n, rng);
    x.resize(n);
    y.resize(m);
    for (double& v : x) v = rng.normal();
    for (double& v : y) v = rng.normal();
  }
};

void BM_Apply(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(l0recov::apply(f.a, f.x));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * f.a.rows() * f.a.cols() * sizeof(double)));
}
BENCHMARK(BM_Apply)->RangeMultiplier(4)->Range(256, 4096);

void BM_Adjoint(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(apply_adjoint(f.a, f.y));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * f.a.rows() * f.a.cols() * sizeof(double)));
}
BENCHMARK(BM_Adjoint)->RangeMultiplier(4)->Range(256, 4096);

void BM_IihtStep(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(iiht_step(f.a, f.y, f.x, 350.0, 0.05));
}
BENCHMARK(BM_IihtStep)->RangeMultiplier(4)->Range(256, 4096);

void BM_TopK(benchmark::State& state) {
  RngStream rng(2);
  Vector x(static_cast<std::size_t>(state.range(0)));
  for (double& v : x) v = rng.normal();
  const std::size_t k = x.size() / 20;
  for (auto _ : state) benchmark::DoNotOptimize(top_k(x, k));
}
BENCHMARK(BM_TopK)->RangeMultiplier(4)->Range(1024, 1 << 16);

void BM_HardThreshold(benchmark::State& state) {
  RngStream rng(3);
  Vector x(static_cast<std::size_t>(state.range(0)));
  for (double& v : x) v = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(hard_vector(x, 1.0));
}
BENCHMARK(BM_HardThreshold)->RangeMultiplier(4)->Range(1024, 1 << 16);

}  // namespace
