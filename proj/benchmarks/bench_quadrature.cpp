#include <benchmark/benchmark.h>

#include <cmath>
#include <limits>

#include "idsm/criteria.hpp"
#include "idsm/levy.hpp"
#include "idsm/quadrature.hpp"

namespace {

void BM_PowerSingularity(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(idsm::integrate([](double t) { return std::pow(t, -0.7); }, 0.0, 1.0).value);
  }
}
BENCHMARK(BM_PowerSingularity);

void BM_SlowTail(benchmark::State& state) {
  const double inf = std::numeric_limits<double>::infinity();
  for (auto _ : state) {
    benchmark::DoNotOptimize(idsm::integrate([](double t) { return std::pow(t, -1.05); }, 1.0, inf).value);
  }
}
BENCHMARK(BM_SlowTail);

void BM_CfInnerQuadrature(benchmark::State& state) {
  const auto rho = idsm::LevyMeasure1D::tempered_stable(1.5, 1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(idsm::cf_inner(rho, 3.0, false).value);
  }
}
BENCHMARK(BM_CfInnerQuadrature);

void BM_TailQuantile(benchmark::State& state) {
  const auto rho = state.range(0) == 0 ? idsm::LevyMeasure1D::stable(1.5, 1.0)
                                       : idsm::LevyMeasure1D::tempered_stable(1.5, 1.0, 1.0);
  double s = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(idsm::tail_quantile(rho, s));
    s = s < 100.0 ? s * 1.01 : 0.5;
  }
}
BENCHMARK(BM_TailQuantile)->Arg(0)->Arg(1);

void BM_Verdict(benchmark::State& state) {
  const auto model = idsm::single_point_model(idsm::LevyMeasure1D::tempered_stable(1.2, 1.0, 1.0));
  const auto kernel = idsm::KernelSpec::fractional(0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(idsm::verdict(model, kernel, {false}).verdict);
  }
}
BENCHMARK(BM_Verdict)->Unit(benchmark::kMillisecond);

}  // namespace
