#include <benchmark/benchmark.h>

#include "asl/consistency.hpp"
#include "asl/driver.hpp"
#include "asl/harness.hpp"
#include "asl/nonadaptive.hpp"
#include "asl/slrt.hpp"

using namespace asl;

static void BM_NormalDraws(benchmark::State& state) {
  Rng rng(1);
  double acc = 0;
  for (auto _ : state) acc += rng.normal();
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_NormalDraws);

static void BM_RunSlrt(benchmark::State& state) {
  const double eta = 1.0 / double(state.range(0));
  const SignalInstance h0(1, 1.0, {});
  const SlrtConfig cfg = SlrtConfig::make(0.01, 0.01, 1.0, eta);
  Rng rng(2);
  int64_t samples = 0;
  for (auto _ : state) {
    BudgetLedger ledger(1.0, -1.0);
    samples += run_slrt(h0, 1, cfg, ledger, rng).samples;
  }
  state.SetItemsProcessed(samples);
}
BENCHMARK(BM_RunSlrt)->Arg(10)->Arg(100)->Arg(1000);

static void BM_TrackerUpdate(benchmark::State& state) {
  // one full truthful scan of an interval class per iteration
  const ClassSpec spec = ClassSpec::interval(1024, 16);
  const Support truth = {101, 102, 103, 104, 105, 106, 107, 108,
                         109, 110, 111, 112, 113, 114, 115, 116};
  for (auto _ : state) {
    ConsistencyTracker tracker(spec);
    for (Coord c = 1; c <= spec.n && tracker.verdict() == Verdict::Many; ++c)
      tracker.update(c, std::binary_search(truth.begin(), truth.end(), c));
    benchmark::DoNotOptimize(tracker.verdict());
  }
}
BENCHMARK(BM_TrackerUpdate);

static void BM_UnionStarsVerdict(benchmark::State& state) {
  const ClassSpec spec = ClassSpec::union_stars(64, 8, 3);
  Rng rng(3);
  const Support truth = sample_support(spec, rng);
  for (auto _ : state) {
    ConsistencyTracker tracker(spec);
    auto strat = make_strategy(spec, 0);
    Rng run_rng(4);
    run_noiseless(spec, *strat, truth, run_rng);
    benchmark::DoNotOptimize(strat->queries_made());
  }
}
BENCHMARK(BM_UnionStarsVerdict);

static void BM_MlUnionIntervals(benchmark::State& state) {
  const ClassSpec spec = ClassSpec::union_intervals(4096, 16, 4);
  Rng rng(5);
  std::vector<double> y(spec.n);
  for (auto& v : y) v = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(ml_estimate(spec, y));
}
BENCHMARK(BM_MlUnionIntervals);

static void BM_AdaptiveTrial(benchmark::State& state) {
  const ClassSpec spec = ClassSpec::interval(1024, 16);
  const AllocationRule rule = AllocationRule::for_class(spec, 0.1);
  int64_t tests = 0;
  int i = 0;
  for (auto _ : state) {
    Rng rng = Rng::for_trial(6, i++);
    const SignalInstance sig(spec.n, 0.8404, sample_support(spec, rng));
    auto strat = make_strategy(spec, 0);
    BudgetLedger ledger(1024.0, 10.0);
    tests += run_adaptive(spec, *strat, rule, sig, 0.01, ledger, rng).tests_run;
  }
  state.SetItemsProcessed(tests);
}
BENCHMARK(BM_AdaptiveTrial);

BENCHMARK_MAIN();
