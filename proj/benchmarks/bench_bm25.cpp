#include <benchmark/benchmark.h>

#include "synthcoll/forge/pipeline.hpp"
#include "synthcoll/retrieval/bm25.hpp"
#include "synthcoll/retrieval/index.hpp"

using namespace synthcoll;

namespace {

const forge::Corpus& corpus() {
  static const forge::Corpus c = [] {
    forge::ForgeConfig cfg;
    cfg.subtopics_requested = 20;
    cfg.random_docs_total = 2000;
    Topic t{"1", "coastal erosion", "Effects of sea level rise on coastal erosion and beach loss.", std::nullopt};
    return forge::run_forge({t}, cfg, genclient::MockProvider{}).corpus;
  }();
  return c;
}

void BM_IndexBuild(benchmark::State& state) {
  for (auto _ : state) {
    auto idx = retrieval::Index::build(corpus(), text::Analyzer::english());
    benchmark::DoNotOptimize(idx.term_count());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().size()));
}
BENCHMARK(BM_IndexBuild)->Unit(benchmark::kMillisecond);

void BM_Search(benchmark::State& state) {
  const auto idx = retrieval::Index::build(corpus(), text::Analyzer::english());
  for (auto _ : state) {
    auto r = retrieval::bm25_search(idx, "coastal erosion sea level beach", {}, 1000, "1");
    benchmark::DoNotOptimize(r.data());
  }
}
BENCHMARK(BM_Search)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
