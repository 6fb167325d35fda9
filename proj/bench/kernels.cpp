// Serial reference vs OpenMP path for the parallel kernels. Arg 0 = serial, 1 = parallel.
#include <benchmark/benchmark.h>

#include "folner/dp.hpp"
#include "folner/folner.hpp"

using namespace folner;

namespace {

Exec mode(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void BM_BruteForce(benchmark::State& state) {
  const std::vector<std::size_t> degrees{3, 3, 3};
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_counts(degrees, mode(state)));
}

void BM_SampleTally(benchmark::State& state) {
  const ProfileSampler sampler(5, 2);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_tally(sampler, 2, Stratum::member, 2000, ++seed, mode(state)));
}

void BM_LemmaSuite(benchmark::State& state) {
  const ProfileSampler sampler(5, 2);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(lemma_suite(sampler, 2, 200, ++seed, mode(state)));
}

void BM_DecayReport(benchmark::State& state) {
  const auto v = ValencySequence::formula("sqrt-log");
  DecayOptions opts;
  opts.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(decay_report(v, 2000, opts));
}

}  // namespace

BENCHMARK(BM_BruteForce)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleTally)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LemmaSuite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecayReport)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
