#include <benchmark/benchmark.h>

#include <cmath>

#include "nlsnorm/dynamics.hpp"
#include "nlsnorm/energy.hpp"
#include "nlsnorm/fibermap.hpp"
#include "nlsnorm/pathlab.hpp"

using namespace nlsnorm;

static void BM_Integrate(benchmark::State& state) {
  auto g = make_grid(4, 20.0, state.range(0), GridStretch::graded, 3.0);
  auto u = sample(g, [](double r) { return std::exp(-r * r); });
  for (auto _ : state) benchmark::DoNotOptimize(integrate(u));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Integrate)->RangeMultiplier(4)->Range(1024, 1 << 17)->Complexity();

static void BM_GradNormSq(benchmark::State& state) {
  auto g = make_grid(4, 20.0, state.range(0), GridStretch::graded, 3.0);
  auto u = sample(g, [](double r) { return std::exp(-r * r); });
  for (auto _ : state) benchmark::DoNotOptimize(grad_norm_sq(u));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GradNormSq)->RangeMultiplier(4)->Range(1024, 1 << 17)->Complexity();

static void BM_RadialLaplacian(benchmark::State& state) {
  auto g = make_grid(4, 20.0, state.range(0), GridStretch::graded, 3.0);
  auto u = sample(g, [](double r) { return std::exp(-0.5 * r * r); });
  for (auto _ : state) benchmark::DoNotOptimize(radial_laplacian(u));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RadialLaplacian)->RangeMultiplier(4)->Range(1024, 1 << 17)->Complexity();

static void BM_Rescale(benchmark::State& state) {
  auto g = make_grid(4, 20.0, state.range(0), GridStretch::graded, 3.0);
  auto u = sample(g, [](double r) { return std::exp(-r * r); });
  for (auto _ : state) benchmark::DoNotOptimize(rescale(u, 1.3));
}
BENCHMARK(BM_Rescale)->Arg(4096)->Arg(65536);

static void BM_FiberCriticalPoints(benchmark::State& state) {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 1.0);
  const FiberCoeffs co{1.0, 0.5, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(critical_points(co, p));
}
BENCHMARK(BM_FiberCriticalPoints);

static void BM_TwoCenterOverlap(benchmark::State& state) {
  auto g = make_grid(3, 9.0, 2048);
  auto f = sample(g, [](double r) { return std::exp(-r * r); });
  for (auto _ : state)
    benchmark::DoNotOptimize(two_center_integral(
        [](double a, double b) { return a * b; }, f, f, {1.0, 32}));
}
BENCHMARK(BM_TwoCenterOverlap);

static void BM_SplitStep(benchmark::State& state) {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 0.5);
  auto g = make_grid(4, 16.0, state.range(0), GridStretch::graded, 3.0);
  auto u = sample(g, [](double r) { return std::exp(-r * r); });
  EvolveOptions o;
  o.dt = 1e-3;
  o.T = 50 * o.dt;
  o.record_stride = 1 << 30;
  for (auto _ : state)
    benchmark::DoNotOptimize(evolve(ComplexField::from_real(u), p, o));
  state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(BM_SplitStep)->Arg(2048)->Arg(16384);

BENCHMARK_MAIN();
