#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "synthcoll/text/stopwords.hpp"

namespace synthcoll::text {

/// A maximal run of letters and digits inside a UTF-8 string.
struct TokenSpan {
  std::size_t offset;  // byte offset into the source text
  std::string_view text;
};

/// Splits on every code point that is neither a letter nor a digit.
std::vector<TokenSpan> tokenize_spans(std::string_view text);
std::vector<std::string_view> tokenize(std::string_view text);

enum class Stemmer { kPorter, kNone };

struct AnalyzerOptions {
  bool lowercase = true;
  WordSet stopwords;
  Stemmer stemmer = Stemmer::kPorter;
};

/// tokenize -> lowercase -> drop stopwords -> stem. Stopwords are matched on
/// the lowercased surface form, before stemming.
class Analyzer {
 public:
  Analyzer() = default;
  explicit Analyzer(AnalyzerOptions options) : options_(std::move(options)) {}

  /// Lowercase, Lucene English stop set, Porter.
  static Analyzer english();
  /// Lowercase only: what the text statistics call a "word".
  static Analyzer plain();

  std::vector<std::string> analyze(std::string_view text) const;

  const AnalyzerOptions& options() const noexcept { return options_; }

 private:
  AnalyzerOptions options_;
};

}  // namespace synthcoll::text
