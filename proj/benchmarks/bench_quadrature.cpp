#include <cmath>

#include <benchmark/benchmark.h>

#include "fisherp/quadrature.hpp"

namespace {

void BM_IntegrateGaussianLine(benchmark::State& state) {
  const fisherp::QuadratureConfig config = fisherp::QuadratureConfig::with_rel_tol(1e-10);
  for (auto _ : state) {
    auto v = fisherp::integrate([](double x) { return std::exp(-0.5 * x * x); },
                                fisherp::SupportInterval::real_line(), config);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_IntegrateGaussianLine);

// Endpoint singularity x^(-1/2) on (0, 1).
void BM_IntegrateSingularEnd(benchmark::State& state) {
  for (auto _ : state) {
    auto v = fisherp::integrate([](double x) { return 1.0 / std::sqrt(x); }, {0.0, 1.0});
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_IntegrateSingularEnd);

// 1/x on (0, 1): the classifier has to run out the generations.
void BM_ClassifyDivergent(benchmark::State& state) {
  for (auto _ : state) {
    auto v = fisherp::integrate([](double x) { return 1.0 / x; }, {0.0, 1.0});
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_ClassifyDivergent);

void BM_IntegrateFinite(benchmark::State& state) {
  for (auto _ : state) {
    auto v = fisherp::integrate_finite([](double x) { return std::cos(20.0 * x) * std::exp(-x); }, 0.0, 10.0,
                                       1e-12, 1e-300);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_IntegrateFinite);

}  // namespace
