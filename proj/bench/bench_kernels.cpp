// Serial vs OpenMP timings for the enumeration and sampling kernels.
// Arg 0 is Execution::Serial, arg 1 is Execution::Parallel.

#include <benchmark/benchmark.h>

#include "facloc/axioms.hpp"
#include "facloc/catalog.hpp"
#include "facloc/order_stats.hpp"

using namespace facloc;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::Serial : Execution::Parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_StrategyproofnessAverageOrRandomRank(benchmark::State& state) {
  CheckDomain dom;
  dom.n = 3;
  dom.grid = 12;
  dom.exec = mode(state);
  const auto m = average_or_random_rank(Rational(1, 2), dom.n);
  for (auto _ : state) benchmark::DoNotOptimize(check_strategyproofness(m, Variant::InExpectation, dom));
  label(state);
}
BENCHMARK(BM_StrategyproofnessAverageOrRandomRank)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_StrongProportionalityRandomRank(benchmark::State& state) {
  CheckDomain dom;
  dom.n = 4;
  dom.grid = 12;
  dom.all_subsets = true;
  dom.exec = mode(state);
  const auto m = random_rank(dom.n);
  for (auto _ : state) benchmark::DoNotOptimize(check_strong_proportionality(m, Variant::InExpectation, dom));
  label(state);
}
BENCHMARK(BM_StrongProportionalityRandomRank)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_UniversalStrategyproofnessRealLine(benchmark::State& state) {
  CheckDomain dom;
  dom.n = 3;
  dom.grid = 1;
  dom.domain = Domain::RealLine;
  dom.window = 6;
  dom.exec = mode(state);
  const auto m = random_rank(dom.n, Domain::RealLine);
  for (auto _ : state) benchmark::DoNotOptimize(check_strategyproofness(m, Variant::Universal, dom));
  label(state);
}
BENCHMARK(BM_UniversalStrategyproofnessRealLine)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MonteCarloOrderStatistic(benchmark::State& state) {
  const OrderStatSpec spec{5, UniformOn01{}, 3};
  const Execution exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_order_stat_mean(spec, 1'000'000, 20240611, exec));
  label(state);
}
BENCHMARK(BM_MonteCarloOrderStatistic)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
