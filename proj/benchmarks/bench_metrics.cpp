#include <benchmark/benchmark.h>

#include <random>

#include "synthcoll/eval/kendall.hpp"
#include "synthcoll/eval/metrics.hpp"

using namespace synthcoll;

namespace {

void BM_EvaluateRun(benchmark::State& state) {
  const auto topics = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  Qrels qrels;
  Run run;
  for (int t = 0; t < topics; ++t) {
    const auto tid = std::to_string(t);
    for (int d = 0; d < 1000; ++d) {
      const auto doc = "d" + std::to_string(d);
      if (rng() % 10 == 0) qrels.add({tid, doc, 1});
      run.push_back({tid, doc, static_cast<std::uint32_t>(d + 1), 1000.0 - d, "sys"});
    }
  }
  for (auto _ : state) {
    auto r = eval::evaluate_run(run, qrels);
    benchmark::DoNotOptimize(r.mean.ap);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(run.size()));
}
BENCHMARK(BM_EvaluateRun)->Arg(50)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_KendallTau(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u;
  std::vector<double> x(static_cast<std::size_t>(state.range(0))), y(x.size());
  for (auto& v : x) v = u(rng);
  for (auto& v : y) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(eval::kendall_tau(x, y).tau);
}
BENCHMARK(BM_KendallTau)->Arg(20)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
