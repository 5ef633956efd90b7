#include <benchmark/benchmark.h>

#include "idsm/simulation.hpp"

namespace {

void BM_BuildPaths(benchmark::State& state) {
  const auto model = idsm::single_point_model(idsm::LevyMeasure1D::tempered_stable(1.2, 1.0, 1.0));
  const auto kernel = idsm::KernelSpec::exp_ma(1.0);
  idsm::SeriesConfig c;
  c.gamma_cap = static_cast<double>(state.range(0));
  c.grid_points = 1025;
  const auto series = idsm::sample_series(c, model);
  for (auto _ : state) {
    benchmark::DoNotOptimize(idsm::build_paths(series, c, model, kernel).X.back());
  }
  state.counters["terms"] = static_cast<double>(series.terms());
}
BENCHMARK(BM_BuildPaths)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SampleSeries(benchmark::State& state) {
  const auto model = idsm::single_point_model(idsm::LevyMeasure1D::tempered_stable(1.2, 1.0, 1.0));
  idsm::SeriesConfig c;
  c.gamma_cap = 1000.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(idsm::sample_series(c, model).terms());
    ++c.seed;
  }
}
BENCHMARK(BM_SampleSeries)->Unit(benchmark::kMillisecond);

}  // namespace
