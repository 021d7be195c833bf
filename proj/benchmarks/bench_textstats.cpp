#include <benchmark/benchmark.h>

#include "synthcoll/genclient/provider.hpp"
#include "synthcoll/stats/lexical.hpp"
#include "synthcoll/stats/readability.hpp"
#include "synthcoll/stats/structure.hpp"

using namespace synthcoll;

namespace {

const std::string& text() {
  static const std::string t = [] {
    genclient::MockOptions o;
    o.body_words = 600;
    return genclient::MockProvider(o).generate({"Write a news article about river flooding."}).text;
  }();
  return t;
}

void BM_Readability(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(stats::readability(text()).fre);
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text().size()));
}
BENCHMARK(BM_Readability);

void BM_LexicalDiversity(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(stats::lexical_diversity_text(text()).ttr);
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text().size()));
}
BENCHMARK(BM_LexicalDiversity);

void BM_Structure(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(stats::doc_structure(text()).words);
}
BENCHMARK(BM_Structure);

}  // namespace

BENCHMARK_MAIN();
