#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "synthcoll/error.hpp"
#include "synthcoll/stats/lexical.hpp"
#include "synthcoll/stats/readability.hpp"
#include "synthcoll/stats/sentences.hpp"
#include "synthcoll/stats/structure.hpp"
#include "synthcoll/stats/syllables.hpp"

using namespace synthcoll;
using namespace synthcoll::stats;

namespace {

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double log_choose(double n, double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

double hdd_reference(const std::vector<std::string>& tokens, std::size_t sample) {
  std::map<std::string, std::size_t> freq;
  for (const auto& t : tokens) ++freq[t];
  const double n = static_cast<double>(tokens.size());
  double sum = 0;
  for (const auto& [w, k] : freq) {
    const double miss = (n - k < sample) ? 0.0 : std::exp(log_choose(n - k, sample) - log_choose(n, sample));
    sum += 1.0 - miss;
  }
  return sum / static_cast<double>(sample);
}

}  // namespace

TEST(Sentences, TerminatorsAndAbbreviations) {
  const auto s = split_sentences("Dr. Smith arrived. It rained! Did it stop? Yes");
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0], "Dr. Smith arrived.");
  EXPECT_EQ(s[3], "Yes");
  EXPECT_TRUE(split_sentences("   ").empty());
}

TEST(Sentences, PeriodBeforeBlankLineDoesNotOverlap) {
  const auto s = split_sentences("First one.\n\nSecond one.\n\nThird");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], "First one.");
  EXPECT_EQ(s[1], "Second one.");
  EXPECT_EQ(s[2], "Third");
}

TEST(Syllables, CommonWords) {
  EXPECT_EQ(count_syllables("banana"), 3u);
  EXPECT_EQ(count_syllables("the"), 1u);
  EXPECT_EQ(count_syllables("strength"), 1u);
  EXPECT_EQ(count_syllables("cat"), 1u);
  EXPECT_GE(count_syllables("x"), 1u);
}

TEST(Structure, MeansAndPopulationStd) {
  const auto r = structure_stats(std::vector<std::string>{"one two three.", "a b c d e."});
  EXPECT_EQ(r.doc_count, 2u);
  EXPECT_EQ(r.total_words, 8u);
  EXPECT_DOUBLE_EQ(r.mean_words_per_doc, 4.0);
  EXPECT_DOUBLE_EQ(r.std_words_per_doc, 1.0);
  EXPECT_DOUBLE_EQ(r.mean_sentences_per_doc, 1.0);
  EXPECT_DOUBLE_EQ(r.median_words_per_sentence, 4.0);
  EXPECT_EQ(r.min_words_per_doc, 3u);
  EXPECT_EQ(r.max_words_per_doc, 5u);
  EXPECT_THROW(structure_stats(std::vector<std::string>{}), Error);
}

TEST(Structure, DocCounts) {
  const auto d = doc_structure("Two words. Then three more.");
  EXPECT_EQ(d.words, 5u);
  EXPECT_EQ(d.sentences, 2u);
  EXPECT_EQ(d.words_per_sentence, (std::vector<std::size_t>{2, 3}));
}

TEST(Lexical, TtrAndMaas) {
  EXPECT_DOUBLE_EQ(ttr(split("a b a b")), 0.5);
  EXPECT_NEAR(maas(100, 50), 0.075257, 5e-7);
  EXPECT_EQ(maas(10, 10), 0.0);
}

TEST(Lexical, MtldAlternatingPattern) {
  EXPECT_DOUBLE_EQ(mtld_pass(split("a b a b a b a b a")), 3.0);
  EXPECT_DOUBLE_EQ(mtld(split("a b a b a b a b a")), 3.0);
}

TEST(Lexical, MtldPartialFactor) {
  // "a b a" closes one factor; "c" leaves TTR 1, which adds nothing.
  EXPECT_DOUBLE_EQ(mtld_pass(split("a b a c")), 4.0);
  // "a b a" then "c d e f c": TTR 0.8, partial factor 0.2 / 0.28.
  EXPECT_NEAR(mtld_pass(split("a b a c d e f c")), 8.0 / (1.0 + 0.2 / 0.28), 1e-12);
  // "a b a" then "a a" closes a second factor.
  EXPECT_DOUBLE_EQ(mtld_pass(split("a b a a a")), 2.5);
}

TEST(Lexical, HddAgainstHypergeometricReference) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, 39);
  std::vector<std::string> tokens;
  for (int i = 0; i < 300; ++i) tokens.push_back("w" + std::to_string(pick(rng)));
  EXPECT_NEAR(hdd(tokens), hdd_reference(tokens, 42), 1e-12);
  EXPECT_THROW(hdd(std::vector<std::string>(10, "x")), PreconditionError);
}

TEST(Lexical, HddAgainstMonteCarlo) {
  std::vector<std::string> tokens;
  for (int i = 0; i < 120; ++i) tokens.push_back("t" + std::to_string(i % 17 + (i % 5 == 0 ? 50 : 0)));
  std::mt19937_64 rng(5);
  double total = 0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    auto shuffled = tokens;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::map<std::string, int> seen;
    for (std::size_t i = 0; i < 42; ++i) seen[shuffled[i]] = 1;
    total += static_cast<double>(seen.size()) / 42.0;
  }
  EXPECT_NEAR(hdd(tokens), total / trials, 0.005);
}

TEST(Lexical, ScoresPresence) {
  const auto short_doc = lexical_diversity(split("a b c"));
  EXPECT_EQ(short_doc.n, 3u);
  EXPECT_EQ(short_doc.v, 3u);
  EXPECT_FALSE(short_doc.hdd.has_value());
  EXPECT_FALSE(short_doc.mtld.has_value());
  std::vector<std::string> longer;
  for (int i = 0; i < 60; ++i) longer.push_back("w" + std::to_string(i % 13));
  const auto l = lexical_diversity(longer);
  EXPECT_TRUE(l.hdd.has_value());
  EXPECT_TRUE(l.mtld.has_value());
  const auto t = lexical_diversity_text("Running runs RUN ran.");
  EXPECT_EQ(t.n, 4u);
  EXPECT_EQ(t.v, 4u);
  EXPECT_EQ(t.unique_stems, 2u);
}

TEST(Readability, CatSatOnTheMat) {
  const auto r = readability("The cat sat on the mat.");
  EXPECT_EQ(r.counts.words, 6u);
  EXPECT_EQ(r.counts.sentences, 1u);
  EXPECT_EQ(r.counts.syllables, 6u);
  EXPECT_EQ(r.counts.letters, 17u);
  EXPECT_NEAR(r.kincaid, -1.45, 1e-9);
  EXPECT_NEAR(r.fre, 116.145, 1e-9);
  EXPECT_NEAR(r.ari, -5.085, 1e-9);
}

TEST(Readability, CustomSyllableCounterAndErrors) {
  const auto r = readability("Alpha beta.", [](std::string_view) { return 2u; });
  EXPECT_EQ(r.counts.syllables, 4u);
  EXPECT_THROW(readability("  ...  "), Error);
  EXPECT_THROW(readability_from_counts(ReadabilityCounts{}), PreconditionError);
}

TEST(Readability, StructureAndReadabilityAgreeOnWords) {
  const std::string text = "A first line.\n\nAnother paragraph here. And one more.";
  EXPECT_EQ(doc_structure(text).words, readability_counts(text).words);
  EXPECT_EQ(doc_structure(text).sentences, readability_counts(text).sentences);
}
