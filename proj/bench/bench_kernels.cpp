// Serial vs OpenMP grid kernels. Arguments: grid side n (n*n wavenumbers),
// and for the parallel variant the thread count.

#include <benchmark/benchmark.h>

#include "resbif/kernels.hpp"

using namespace resbif;

namespace {

std::vector<cplx> grid(int n) {
  std::vector<cplx> ks;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ks.emplace_back(-5.0 + 10.0 * i / (n - 1), -5.0 + 10.0 * j / (n - 1));
  return ks;
}

const PotentialSpec& spec() {
  static const PotentialSpec s = PotentialSpec::smooth_well(24.0, -11.0);
  return s;
}

void BM_ScatterSerial(benchmark::State& st) {
  const auto ks = grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::scatter_serial(spec(), ks));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(ks.size()));
}

void BM_ScatterParallel(benchmark::State& st) {
  const auto ks = grid(static_cast<int>(st.range(0)));
  const int jobs = static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::scatter_parallel(spec(), ks, {}, jobs));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(ks.size()));
}

void BM_TargetSerial(benchmark::State& st) {
  const auto ks = grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::target_serial(spec(), Target::W, ks));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(ks.size()));
}

void BM_TargetParallel(benchmark::State& st) {
  const auto ks = grid(static_cast<int>(st.range(0)));
  const int jobs = static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::target_parallel(spec(), Target::W, ks, {}, jobs));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(ks.size()));
}

}  // namespace

BENCHMARK(BM_ScatterSerial)->Arg(21)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScatterParallel)->ArgsProduct({{21}, {2, 4, 0}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TargetSerial)->Arg(21)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TargetParallel)->ArgsProduct({{21}, {2, 4, 0}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
