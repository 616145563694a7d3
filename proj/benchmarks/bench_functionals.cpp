#include <benchmark/benchmark.h>

#include "fisherp/convolution.hpp"
#include "fisherp/functionals.hpp"
#include "fisherp/profile.hpp"

namespace {

void BM_FisherGamma(benchmark::State& state) {
  const auto model = fisherp::DensityModel::gamma(10.0);
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fisherp::fisher_info(model, p));
}
BENCHMARK(BM_FisherGamma)->DenseRange(1, 3);

void BM_FisherNormal(benchmark::State& state) {
  const auto model = fisherp::DensityModel::normal(0.0, 2.0);
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fisherp::fisher_info(model, p));
}
BENCHMARK(BM_FisherNormal)->DenseRange(1, 5, 2);

void BM_FisherLogistic(benchmark::State& state) {
  const auto model = fisherp::DensityModel::logistic();
  for (auto _ : state) benchmark::DoNotOptimize(fisherp::fisher_info(model, 2));
}
BENCHMARK(BM_FisherLogistic);

void BM_DivergentGate(benchmark::State& state) {
  const auto model = fisherp::DensityModel::hermite_weighted();
  for (auto _ : state) benchmark::DoNotOptimize(fisherp::fisher_info(model, 2));
}
BENCHMARK(BM_DivergentGate);

void BM_ProfileFisher(benchmark::State& state) {
  const auto model = fisherp::DensityModel::gamma(10.0);
  for (auto _ : state) benchmark::DoNotOptimize(fisherp::info_via_profile(model, 2.0));
}
BENCHMARK(BM_ProfileFisher);

void BM_ConvolvedGammaPair(benchmark::State& state) {
  const fisherp::ConvolvedDensity sum(fisherp::DensityModel::gamma(10.0), fisherp::DensityModel::gamma(10.0));
  for (auto _ : state) benchmark::DoNotOptimize(fisherp::fisher_info_convolved(sum, 2));
}
BENCHMARK(BM_ConvolvedGammaPair)->Unit(benchmark::kMillisecond);

void BM_SmoothedGamma(benchmark::State& state) {
  const auto model = fisherp::DensityModel::gaussian_convolution(fisherp::DensityModel::gamma(10.0), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(fisherp::fisher_info(model, 1));
}
BENCHMARK(BM_SmoothedGamma)->Unit(benchmark::kMillisecond);

}  // namespace
