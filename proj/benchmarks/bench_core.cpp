#include <benchmark/benchmark.h>

#include <cmath>

#include "annulus/annulus.hpp"

using namespace annulus;

static void BM_EnumerateGamma(benchmark::State& state) {
  const double radius = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto g = enumerate_gamma(radius);
    benchmark::DoNotOptimize(g.size());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(std::sqrt(8.0) * 3.14159 * radius));
}
BENCHMARK(BM_EnumerateGamma)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_AreaSeries(benchmark::State& state) {
  const auto g = enumerate_gamma(static_cast<double>(state.range(0)));
  for (auto _ : state) {
    auto s = area_series(g, 1);
    benchmark::DoNotOptimize(s.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_AreaSeries)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_AInf(benchmark::State& state) {
  double r = -0.7;
  double th = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(a_inf(r, th));
    r = r > 0.7 ? -0.7 : r + 0.013;
    th += 0.017;
  }
}
BENCHMARK(BM_AInf);

static void BM_AInfOracle(benchmark::State& state) {
  double r = -0.7;
  double th = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(a_inf_oracle(r, th));
    r = r > 0.7 ? -0.7 : r + 0.013;
    th += 0.017;
  }
}
BENCHMARK(BM_AInfOracle);

static void BM_C0(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(c0_constant());
}
BENCHMARK(BM_C0);

static void BM_RectPoints(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  double th = 0.1;
  for (auto _ : state) {
    auto s = rect_points(0.2, th, k);
    benchmark::DoNotOptimize(s.points.data());
    th += 0.01;
  }
}
BENCHMARK(BM_RectPoints)->Arg(8)->Arg(100)->Arg(10000);

static void BM_ModelCk(benchmark::State& state) {
  const int k_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto v = model_ck_range(k_max, 100000, 42, {1});
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_ModelCk)->Arg(8)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_PairSweep(benchmark::State& state) {
  const auto g = enumerate_gamma(static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mean_pair_count(g, 50));
  }
}
BENCHMARK(BM_PairSweep)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_SectorVariance(benchmark::State& state) {
  const double radius = 1e4;
  const auto g = enumerate_gamma(radius);
  const double w = std::pow(radius, -0.95);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sector_variance_empirical(g, Interval::full_radial(), w,
                                                       default_sector_grid(radius)));
  }
}
BENCHMARK(BM_SectorVariance)->Unit(benchmark::kMillisecond);

static void BM_DOfI(benchmark::State& state) {
  const double lambda = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(d_of_i(Interval::full_radial(), lambda).value);
}
BENCHMARK(BM_DOfI)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
