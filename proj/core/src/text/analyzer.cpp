#include "synthcoll/text/analyzer.hpp"

#include "synthcoll/text/porter.hpp"
#include "synthcoll/text/utf8.hpp"

namespace synthcoll::text {

std::vector<TokenSpan> tokenize_spans(std::string_view text) {
  std::vector<TokenSpan> out;
  std::size_t pos = 0;
  std::size_t start = std::string_view::npos;
  while (pos < text.size()) {
    const std::size_t here = pos;
    const char32_t cp = decode_utf8(text, pos);
    if (is_word_char(cp)) {
      if (start == std::string_view::npos) start = here;
    } else if (start != std::string_view::npos) {
      out.push_back({start, text.substr(start, here - start)});
      start = std::string_view::npos;
    }
  }
  if (start != std::string_view::npos) {
    out.push_back({start, text.substr(start)});
  }
  return out;
}

std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> out;
  for (const auto& span : tokenize_spans(text)) out.push_back(span.text);
  return out;
}

Analyzer Analyzer::english() {
  return Analyzer(AnalyzerOptions{true, retrieval_stopwords(), Stemmer::kPorter});
}

Analyzer Analyzer::plain() {
  return Analyzer(AnalyzerOptions{true, {}, Stemmer::kNone});
}

std::vector<std::string> Analyzer::analyze(std::string_view text) const {
  std::vector<std::string> out;
  for (const auto token : tokenize(text)) {
    std::string term = options_.lowercase ? to_lower(token) : std::string(token);
    if (options_.stopwords.contains(term)) continue;
    if (options_.stemmer == Stemmer::kPorter) term = porter_stem(term);
    out.push_back(std::move(term));
  }
  return out;
}

}  // namespace synthcoll::text
