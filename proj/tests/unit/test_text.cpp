#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "synthcoll/text/analyzer.hpp"
#include "synthcoll/text/lexicon.hpp"
#include "synthcoll/text/porter.hpp"
#include "synthcoll/text/stopwords.hpp"
#include "synthcoll/text/utf8.hpp"

using namespace synthcoll::text;

TEST(Porter, MatchesExternalVocabularyOracle) {
  std::ifstream in(SYNTHCOLL_TEST_DATA_DIR "/porter_vocabulary.tsv");
  ASSERT_TRUE(in) << "missing oracle file";
  std::string line;
  std::size_t checked = 0;
  std::vector<std::string> mismatches;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    ASSERT_NE(tab, std::string::npos);
    const auto word = line.substr(0, tab);
    const auto expected = line.substr(tab + 1);
    ++checked;
    const auto got = porter_stem(word);
    if (got != expected) mismatches.push_back(word + " -> " + got + " (want " + expected + ")");
  }
  EXPECT_GT(checked, 3000u);
  std::ostringstream msg;
  for (const auto& m : mismatches) msg << m << "\n";
  EXPECT_TRUE(mismatches.empty()) << mismatches.size() << " mismatches:\n" << msg.str();
}

TEST(Porter, ClassicExamples) {
  EXPECT_EQ(porter_stem("caresses"), "caress");
  EXPECT_EQ(porter_stem("ponies"), "poni");
  EXPECT_EQ(porter_stem("cats"), "cat");
  EXPECT_EQ(porter_stem("relational"), "relat");
  EXPECT_EQ(porter_stem("generalization"), "gener");
  EXPECT_EQ(porter_stem("hopping"), "hop");
  EXPECT_EQ(porter_stem("a"), "a");
  EXPECT_EQ(porter_stem(""), "");
}

TEST(Tokenizer, SplitsOnNonAlphanumerics) {
  const auto t = tokenize("Hello, world! It's 2024-ish.");
  const std::vector<std::string_view> want{"Hello", "world", "It", "s", "2024", "ish"};
  EXPECT_EQ(t, want);
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("  ... !").empty());
}

TEST(Tokenizer, KeepsNonAsciiLetters) {
  const auto t = tokenize("naïve café");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0], "naïve");
  EXPECT_EQ(utf8_length(t[0]), 5u);
}

TEST(Tokenizer, SpansCarryByteOffsets) {
  const auto s = tokenize_spans("ab  cd");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].offset, 4u);
}

TEST(Analyzer, EnglishLowercasesDropsStopwordsAndStems) {
  const auto a = Analyzer::english();
  const std::vector<std::string> want{"cat", "chase", "mice"};
  EXPECT_EQ(a.analyze("The Cats are chasing the mice"), want);
}

TEST(Analyzer, PlainKeepsEverySurfaceForm) {
  const std::vector<std::string> want{"the", "cats", "are"};
  EXPECT_EQ(Analyzer::plain().analyze("The Cats are"), want);
}

TEST(Analyzer, NoStemmerOption) {
  AnalyzerOptions o;
  o.stemmer = Stemmer::kNone;
  o.stopwords = retrieval_stopwords();
  const std::vector<std::string> want{"cats", "chasing", "mice"};
  EXPECT_EQ(Analyzer(o).analyze("The cats are chasing mice"), want);
}

TEST(Stopwords, LuceneSetHas33Words) {
  EXPECT_EQ(retrieval_stopwords().size(), 33u);
  EXPECT_TRUE(retrieval_stopwords().contains("the"));
  EXPECT_FALSE(retrieval_stopwords().contains("germany"));
  EXPECT_TRUE(function_words().contains("could"));
}

TEST(Utf8, LowercaseAndLength) {
  EXPECT_EQ(to_lower("ÉCOLE Abc"), "école abc");
  EXPECT_EQ(utf8_length("€uro"), 4u);
  std::size_t pos = 0;
  EXPECT_EQ(decode_utf8("é", pos), U'é');
  EXPECT_EQ(pos, 2u);
}

TEST(Lexicon, FamilyFrequenciesOrderCommonAboveRare) {
  EXPECT_GT(word_family_frequency(porter_stem("people")), word_family_frequency(porter_stem("steel")));
  EXPECT_EQ(word_family_frequency("zzzqqq"), 0.0);
  EXPECT_EQ(mock_vocabulary().size(), 5000u);
}
