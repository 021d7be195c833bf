#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>

#include "synthcoll/error.hpp"
#include "synthcoll/random.hpp"
#include "synthcoll/retrieval/bm25.hpp"
#include "synthcoll/retrieval/embedding.hpp"
#include "synthcoll/retrieval/fusion.hpp"
#include "synthcoll/retrieval/index.hpp"
#include "synthcoll/retrieval/rerank.hpp"
#include "synthcoll/retrieval/run.hpp"
#include "synthcoll/retrieval/vector_store.hpp"
#include "test_support.hpp"

using namespace synthcoll;
using namespace synthcoll::retrieval;

namespace {

text::Analyzer bare() {
  text::AnalyzerOptions o;
  o.stemmer = text::Stemmer::kNone;
  return text::Analyzer(o);
}

// Textbook BM25 evaluated directly, independent of the index.
double brute_bm25(const std::vector<std::vector<std::string>>& docs, std::size_t d,
                  const std::vector<std::string>& query, double k1, double b) {
  double avgdl = 0;
  for (const auto& x : docs) avgdl += static_cast<double>(x.size());
  avgdl /= static_cast<double>(docs.size());
  double s = 0;
  for (const auto& q : query) {
    double df = 0;
    for (const auto& x : docs) df += std::find(x.begin(), x.end(), q) != x.end() ? 1 : 0;
    if (df == 0) continue;
    const double n = static_cast<double>(docs.size());
    const double idf = std::log(1 + (n - df + 0.5) / (df + 0.5));
    const double tf = static_cast<double>(std::count(docs[d].begin(), docs[d].end(), q));
    const double dl = static_cast<double>(docs[d].size());
    s += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * dl / avgdl));
  }
  return s;
}

std::vector<RunEntry> entries(const std::string& topic, const std::vector<std::pair<std::string, double>>& ds,
                              const std::string& tag = "t") {
  std::vector<RunEntry> out;
  std::uint32_t rank = 1;
  for (const auto& [d, s] : ds) out.push_back({topic, d, rank++, s, tag});
  return out;
}

}  // namespace

TEST(Index, PorterPostings) {
  const auto idx = Index::build(std::vector<IndexDoc>{{"d0", "cats cat"}}, text::Analyzer::english());
  ASSERT_EQ(idx.all_postings().size(), 1u);
  EXPECT_EQ(idx.postings("cat"), (std::vector<Posting>{{0, 2}}));
  EXPECT_TRUE(idx.postings("cats").empty());
}

TEST(Index, StopwordOnlyDoc) {
  const auto idx = Index::build(std::vector<IndexDoc>{{"a", "the and of"}, {"b", "glacier"}}, text::Analyzer::english());
  EXPECT_EQ(idx.doc_length(0), 0u);
  EXPECT_EQ(idx.term_count(), 1u);
  EXPECT_DOUBLE_EQ(idx.avgdl(), 0.5);
}

TEST(Index, AvgdlIsMeanLength) {
  const auto idx = Index::build(std::vector<IndexDoc>{{"x", "a b"}, {"y", "a a b"}, {"z", "c"}}, bare());
  EXPECT_DOUBLE_EQ(idx.avgdl(), 2.0);
  EXPECT_EQ(idx.doc_count(), 3u);
}

TEST(Index, ErrorsAndOrdinalOrder) {
  EXPECT_THROW(Index::build(std::vector<IndexDoc>{}, bare()), Error);
  EXPECT_THROW(Index::build(std::vector<IndexDoc>{{"a", "x"}, {"a", "y"}}, bare()), InvariantError);
  const auto idx = Index::build(std::vector<IndexDoc>{{"b", "x"}, {"a", "y"}}, bare());
  EXPECT_EQ(idx.doc_id(0), "a");
}

TEST(Index, SaveLoadRoundTrip) {
  const auto idx = Index::build(std::vector<IndexDoc>{{"x", "Cats chase mice"}, {"y", "the dog"}},
                                text::Analyzer::english());
  synthcoll::testing::TempDir dir;
  idx.save(dir.file("i.bin"));
  const auto back = Index::load(dir.file("i.bin"));
  EXPECT_EQ(back.doc_ids(), idx.doc_ids());
  EXPECT_EQ(back.all_postings(), idx.all_postings());
  EXPECT_EQ(back.analyzer().analyze("Cats"), idx.analyzer().analyze("Cats"));
  synthcoll::testing::spit(dir.file("bad.bin"), "not an index");
  EXPECT_THROW(Index::load(dir.file("bad.bin")), Error);
}

TEST(Bm25, SingleDocSingleTerm) {
  const auto idx = Index::build(std::vector<IndexDoc>{{"d", "glacier"}}, bare());
  const auto r = bm25_search(idx, "glacier", {}, 10);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0].score, std::log(1 + 0.5 / 1.5), 1e-12);
  EXPECT_NEAR(r[0].score, 0.28768, 1e-5);
}

TEST(Bm25, ThreeDocFixtureMatchesFormula) {
  const std::vector<std::vector<std::string>> toks{{"a", "b"}, {"a", "a", "b"}, {"c"}};
  const auto idx = Index::build(std::vector<IndexDoc>{{"d1", "a b"}, {"d2", "a a b"}, {"d3", "c"}}, bare());
  const auto r = bm25_search(idx, "a", {0.9, 0.4}, 10);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].doc_id, "d2");
  EXPECT_EQ(r[1].doc_id, "d1");
  EXPECT_NEAR(r[0].score, brute_bm25(toks, 1, {"a"}, 0.9, 0.4), 1e-9);
  EXPECT_NEAR(r[1].score, brute_bm25(toks, 0, {"a"}, 0.9, 0.4), 1e-9);
  // Hand evaluation: idf = ln(1 + 1.5/2.5); dl/avgdl = 1.5 and 1.0.
  const double idf = std::log(1.6);
  EXPECT_NEAR(r[0].score, idf * 2 * 1.9 / (2 + 0.9 * (0.6 + 0.4 * 1.5)), 1e-12);
  EXPECT_NEAR(r[1].score, idf * 1.9 / (1 + 0.9), 1e-12);
}

TEST(Bm25, AbsentAndEmptyQueries) {
  const auto idx = Index::build(std::vector<IndexDoc>{{"d1", "a b"}}, text::Analyzer::english());
  EXPECT_TRUE(bm25_search(idx, "zebra", {}, 10).empty());
  EXPECT_TRUE(bm25_search(idx, "the of", {}, 10).empty());
  EXPECT_THROW(bm25_search(idx, "a", {-1, 0.4}, 10), PreconditionError);
  EXPECT_THROW(bm25_search(idx, "a", {0.9, 1.5}, 10), PreconditionError);
}

TEST(Bm25, RandomCorporaMatchBruteForceAndPermutation) {
  SplitMix64 rng(7);
  const std::vector<std::string> vocab{"w0", "w1", "w2", "w3", "w4", "w5"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<IndexDoc> docs;
    std::vector<std::vector<std::string>> toks;
    const auto n = 2 + rng.below(8);
    for (std::uint64_t i = 0; i < n; ++i) {
      std::vector<std::string> t;
      std::string text;
      const auto len = 1 + rng.below(7);
      for (std::uint64_t j = 0; j < len; ++j) {
        t.push_back(vocab[rng.below(vocab.size())]);
        text += t.back() + " ";
      }
      docs.push_back({"d" + std::to_string(i), text});
      toks.push_back(t);
    }
    const std::string query = vocab[rng.below(6)] + " " + vocab[rng.below(6)];
    const auto r = bm25_search(Index::build(docs, bare()), query, {}, 100);
    const std::vector<std::string> q{query.substr(0, 2), query.substr(3, 2)};
    for (const auto& e : r) {
      const auto d = static_cast<std::size_t>(std::stoi(e.doc_id.substr(1)));
      EXPECT_NEAR(e.score, brute_bm25(toks, d, q, 0.9, 0.4), 1e-9);
    }
    auto shuffled = docs;
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937(static_cast<unsigned>(trial)));
    EXPECT_EQ(bm25_search(Index::build(shuffled, bare()), query, {}, 100), r);
  }
}

TEST(RunFormat, LineLayout) {
  EXPECT_EQ(format_run_line({"402", "G-402-S-1", 1, 0.28768, "bm25"}), "402 Q0 G-402-S-1 1 0.287680 bm25");
}

TEST(RunFormat, ReadWriteRoundTrip) {
  synthcoll::Run run = entries("1", {{"a", 2.0}, {"b", 1.0}});
  const auto more = entries("2", {{"c", 0.5}});
  run.insert(run.end(), more.begin(), more.end());
  EXPECT_EQ(read_run(write_run(run)), run);
  EXPECT_EQ(group_by_topic(run).size(), 2u);
  EXPECT_EQ(flatten(group_by_topic(run)), run);
}

TEST(RunFormat, ValidationNamesLines) {
  const auto expect_line = [](const std::string& text, std::size_t line) {
    try {
      read_run(text);
      FAIL() << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << e.what();
    }
  };
  expect_line("1 Q0 a 1 2.0 t\n1 Q0 b 3 1.0 t\n", 2);
  expect_line("1 Q0 a 1 2.0 t\n1 Q0 a 2 1.0 t\n", 2);
  expect_line("1 Q0 a 1 2.0\n", 1);
  expect_line("1 Q1 a 1 2.0 t\n", 1);
  expect_line("1 Q0 a 1 1.0 t\n1 Q0 b 2 2.0 t\n", 2);
}

TEST(RunFormat, RankEntriesTieBreak) {
  auto e = entries("1", {{"b", 1.0}, {"a", 1.0}, {"c", 2.0}});
  rank_entries(e);
  EXPECT_EQ(e[0].doc_id, "c");
  EXPECT_EQ(e[1].doc_id, "a");
  EXPECT_EQ(e[2].rank, 3u);
}

TEST(VectorStore, OrthonormalSearch) {
  VectorStore s(2);
  s.add("d1", std::vector<float>{1, 0});
  s.add("d2", std::vector<float>{0, 1});
  const auto r = dense_search(s, std::vector<float>{1, 0}, 10);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].doc_id, "d1");
  EXPECT_DOUBLE_EQ(r[0].score, 1.0);
}

TEST(VectorStore, ZeroQueryRanksByDocId) {
  VectorStore s(2);
  s.add("z", std::vector<float>{1, 0});
  s.add("a", std::vector<float>{0, 1});
  const auto r = dense_search(s, std::vector<float>{0, 0}, 10);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].doc_id, "a");
  EXPECT_EQ(r[0].score, 0.0);
  EXPECT_EQ(r[1].score, 0.0);
}

TEST(VectorStore, RandomVectorsMatchBruteForce) {
  SplitMix64 rng(3);
  VectorStore s(4);
  std::vector<std::vector<float>> rows;
  for (int i = 0; i < 5; ++i) {
    std::vector<float> v(4);
    for (auto& x : v) x = static_cast<float>(rng.unit() * 2 - 1);
    rows.push_back(v);
    s.add("d" + std::to_string(i), v);
  }
  const std::vector<float> q{0.3f, -0.2f, 0.9f, 0.1f};
  std::vector<std::pair<double, std::string>> want;
  for (int i = 0; i < 5; ++i) {
    double dot = 0;
    for (int j = 0; j < 4; ++j) dot += static_cast<double>(rows[i][j]) * q[j];
    want.emplace_back(-dot, "d" + std::to_string(i));
  }
  std::sort(want.begin(), want.end());
  const auto r = dense_search(s, q, 5);
  ASSERT_EQ(r.size(), 5u);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(r[i].doc_id, want[i].second);
    EXPECT_NEAR(r[i].score, -want[i].first, 1e-12);
  }
}

TEST(VectorStore, DimensionMismatchNamesBothDims) {
  VectorStore s(3);
  try {
    s.add("x", std::vector<float>{1, 2});
    FAIL();
  } catch (const PreconditionError& e) {
    const std::string w = e.what();
    EXPECT_NE(w.find('2'), std::string::npos);
    EXPECT_NE(w.find('3'), std::string::npos);
  }
  s.add("y", std::vector<float>{1, 2, 3});
  EXPECT_THROW(dense_search(s, std::vector<float>{1}, 1), PreconditionError);
}

TEST(VectorStore, FileLayoutAndRoundTrip) {
  forge::Corpus corpus(2);
  corpus[0].doc_id = "a";
  corpus[0].body = "glacier ice melt";
  corpus[1].doc_id = "b";
  corpus[1].body = "bicycle lanes";
  const MockEmbedder emb(16);
  const auto store = embed_corpus(corpus, emb);
  synthcoll::testing::TempDir dir;
  store.save(dir.file("v.bin"));
  EXPECT_EQ(std::filesystem::file_size(dir.file("v.bin")), 4u + 4u + 4u + 2u * 16u * 4u);
  const auto head = synthcoll::testing::slurp(dir.file("v.bin")).substr(0, 4);
  EXPECT_EQ(head, "VEC1");
  EXPECT_EQ(VectorStore::load(dir.file("v.bin")), store);
  EXPECT_EQ(synthcoll::testing::slurp(dir.file("v.bin.ids")), "a\nb\n");
  EXPECT_EQ(embed_corpus({}, emb).size(), 0u);
}

TEST(MockEmbedder, UnitNormAndSharedVocabularyScoresHigher) {
  const MockEmbedder emb(64);
  const auto v = emb.embed({"glacier ice retreat", "glaciers retreating quickly", "bicycle lanes traffic", ""});
  double norm = 0;
  for (const float x : v[0]) norm += static_cast<double>(x) * x;
  EXPECT_NEAR(norm, 1.0, 1e-5);
  const auto dot = [](const std::vector<float>& a, const std::vector<float>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
  };
  EXPECT_GT(dot(v[0], v[1]), dot(v[0], v[2]));
  EXPECT_TRUE(std::all_of(v[3].begin(), v[3].end(), [](float x) { return x == 0.0f; }));
  EXPECT_EQ(emb.embed({"glacier ice retreat"})[0], v[0]);
}

TEST(Fusion, HandExampleTieByDocId) {
  const auto a = entries("1", {{"d1", 10}, {"d2", 0}});
  const auto b = entries("1", {{"d2", 0.3}, {"d1", 0.1}});
  const auto f = fuse(a, b, 0.5, 10);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].doc_id, "d1");
  EXPECT_DOUBLE_EQ(f[0].score, 0.5);
  EXPECT_DOUBLE_EQ(f[1].score, 0.5);
  EXPECT_EQ(f[0].tag, "hybrid");
}

TEST(Fusion, AlphaExtremesReproduceInputs) {
  const auto a = entries("1", {{"x", 3}, {"y", 2}, {"z", 1}});
  const auto b = entries("1", {{"z", 9}, {"x", 5}, {"y", 4}});
  const auto ids = [](const synthcoll::Run& r) {
    std::vector<std::string> out;
    for (const auto& e : r) out.push_back(e.doc_id);
    return out;
  };
  EXPECT_EQ(ids(fuse(a, b, 1.0, 10)), ids(a));
  EXPECT_EQ(ids(fuse(a, b, 0.0, 10)), ids(b));
}

TEST(Fusion, ConstantRunAndErrors) {
  const auto a = entries("1", {{"x", 2}, {"y", 2}});
  const auto f = fuse(a, a, 0.5, 10);
  EXPECT_DOUBLE_EQ(f[0].score, 0.5);
  EXPECT_THROW(fuse(a, a, 1.5, 10), PreconditionError);
  EXPECT_THROW(fuse(a, entries("2", {{"x", 1}}), 0.5, 10), PreconditionError);
  EXPECT_EQ(fuse(a, a, 0.5, 1).size(), 1u);
}

namespace {
std::map<std::string, std::string, std::less<>> one_query() { return {{"1", "q"}}; }
const std::string kText = "text";
const TextLookup kLookup = [](const std::string&) { return &kText; };
}  // namespace

TEST(Rerank, IdentityScorerKeepsOrder) {
  const auto run = entries("1", {{"a", 3}, {"b", 2}, {"c", 1}});
  const FunctionReranker identity([](const std::string&, const std::vector<std::string>& p) {
    std::vector<double> s;
    for (std::size_t i = 0; i < p.size(); ++i) s.push_back(-static_cast<double>(i + 1));
    return s;
  });
  const auto out = rerank(run, one_query(), kLookup, identity, 100);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].doc_id, "a");
  EXPECT_EQ(out[2].doc_id, "c");
  EXPECT_EQ(out[0].tag, "rerank");
}

TEST(Rerank, ReversingScorer) {
  const auto run = entries("1", {{"a", 3}, {"b", 2}, {"c", 1}});
  const FunctionReranker reverse([](const std::string&, const std::vector<std::string>& p) {
    std::vector<double> s;
    for (std::size_t i = 0; i < p.size(); ++i) s.push_back(static_cast<double>(i + 1));
    return s;
  });
  const auto out = rerank(run, one_query(), kLookup, reverse, 3);
  EXPECT_EQ(out[0].doc_id, "c");
  EXPECT_EQ(out[1].doc_id, "b");
  EXPECT_EQ(out[2].doc_id, "a");
}

TEST(Rerank, TailKeepsOrderBelowHead) {
  const auto run = entries("1", {{"a", 4}, {"b", 3}, {"c", 2}, {"d", 1}});
  const FunctionReranker reverse([](const std::string&, const std::vector<std::string>& p) {
    std::vector<double> s;
    for (std::size_t i = 0; i < p.size(); ++i) s.push_back(static_cast<double>(i + 1));
    return s;
  });
  const auto out = rerank(run, one_query(), kLookup, reverse, 2);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[0].doc_id, "b");
  EXPECT_EQ(out[1].doc_id, "a");
  EXPECT_EQ(out[2].doc_id, "c");
  EXPECT_EQ(out[3].doc_id, "d");
  EXPECT_LT(out[2].score, out[1].score);
  EXPECT_DOUBLE_EQ(out[2].score, out[1].score - 1);
  EXPECT_LT(out[3].score, out[2].score);
  EXPECT_NO_THROW(read_run(write_run(out)));
}

TEST(Rerank, CountMismatchAndMissingInputs) {
  const auto run = entries("1", {{"a", 1}});
  const FunctionReranker broken([](const std::string&, const std::vector<std::string>&) {
    return std::vector<double>{1, 2};
  });
  EXPECT_THROW(rerank(run, one_query(), kLookup, broken), Error);
  const MockReranker mock;
  EXPECT_THROW(rerank(run, {}, kLookup, mock), Error);
  EXPECT_THROW(rerank(run, one_query(), [](const std::string&) -> const std::string* { return nullptr; }, mock),
               Error);
}

TEST(MockReranker, PrefersQueryTerms) {
  const MockReranker m;
  const auto s = m.score("glacier retreat", {"bicycle lanes", "the glacier is in retreat"});
  EXPECT_GT(s[1], s[0]);
  EXPECT_EQ(s[0], 0.0);
}
