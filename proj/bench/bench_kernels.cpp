// Serial reference kernels against the OpenMP kernels. Thread count is the
// benchmark argument for the parallel variants.

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "sphmax/operators.hpp"
#include "sphmax/parallel.hpp"
#include "sphmax/reference.hpp"
#include "sphmax/sphere_geometry.hpp"

using namespace sphmax;

namespace {

constexpr std::size_t kNodes = 200000;

const Integrand& bump() {
  static const Integrand f = [](Point y) {
    double s = 0;
    for (double v : y) s += (v - 0.2) * (v - 0.2);
    return std::exp(-s);
  };
  return f;
}

const SphereQuadrature& sphere6() {
  static const SphereQuadrature q = sample_sphere(6, kNodes, 1);
  return q;
}

const std::vector<TestFunction>& gaussians() {
  static const std::vector<TestFunction> fs{TestFunction::gaussian({0.3, 0.1}, 0.8),
                                            TestFunction::gaussian({-0.2, 0.5}, 1.2),
                                            TestFunction::gaussian({0.0, 0.0}, 0.6)};
  return fs;
}

void BM_integrate_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(reference::integrate(sphere6(), bump()).value);
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * kNodes));
}

void BM_integrate_openmp(benchmark::State& st) {
  set_threads(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(integrate(sphere6(), bump()).value);
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * kNodes));
}

void BM_slice_serial(benchmark::State& st) {
  static const BallQuadrature ball = sample_ball(2, kNodes, 2);
  static const SphereQuadrature inner =
      sample_sphere(4, kNodes, 3).with_convention(MeasureConvention::SurfaceArea);
  for (auto _ : st) benchmark::DoNotOptimize(reference::slice_paired(3, 2, 1, bump(), ball, inner).value);
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * kNodes));
}

void BM_slice_openmp(benchmark::State& st) {
  static const BallQuadrature ball = sample_ball(2, kNodes, 2);
  static const SphereQuadrature inner =
      sample_sphere(4, kNodes, 3).with_convention(MeasureConvention::SurfaceArea);
  set_threads(static_cast<int>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(slice_integrate(3, 2, 1, bump(), ball, inner, SliceMode::Paired).value);
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * kNodes));
}

void BM_mean_serial(benchmark::State& st) {
  const std::vector<double> x{0.4, -0.3};
  for (auto _ : st) benchmark::DoNotOptimize(reference::spherical_mean(gaussians(), x, 0.9, sphere6()));
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * kNodes));
}

void BM_mean_openmp(benchmark::State& st) {
  const std::vector<double> x{0.4, -0.3};
  const OperatorConfig cfg{sphere6(), RadiusGrid::single(0.9), false, std::nullopt};
  set_threads(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(spherical_mean_multi(gaussians(), x, 0.9, cfg).estimate.value);
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * kNodes));
}

void thread_args(benchmark::internal::Benchmark* b) {
  for (int t = 1; t <= max_threads(); t *= 2) b->Arg(t);
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_integrate_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_integrate_openmp)->Apply(thread_args);
BENCHMARK(BM_slice_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_slice_openmp)->Apply(thread_args);
BENCHMARK(BM_mean_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mean_openmp)->Apply(thread_args);

BENCHMARK_MAIN();
