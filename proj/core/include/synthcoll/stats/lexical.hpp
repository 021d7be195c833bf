#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "synthcoll/forge/document.hpp"

namespace synthcoll::stats {

inline constexpr std::size_t kHddSampleSize = 42;
inline constexpr std::size_t kMtldMinTokens = 50;
inline constexpr double kMtldThreshold = 0.72;

double ttr(const std::vector<std::string>& tokens);
/// (log10 N - log10 V) / (log10 N)^2; 0 when N == V.
double maas(std::size_t n, std::size_t v);
/// Mean over a 42-token hypergeometric sample of each type's chance of
/// appearing: sum_types (1 - P(0 of type in sample)) / 42. Throws
/// PreconditionError when fewer than `sample` tokens.
double hdd(const std::vector<std::string>& tokens, std::size_t sample = kHddSampleSize);
/// One pass: tokens / factors, where a factor closes when the running TTR
/// drops below the threshold and a trailing partial factor counts
/// (1 - TTR) / (1 - threshold).
double mtld_pass(const std::vector<std::string>& tokens, double threshold = kMtldThreshold);
/// Mean of the forward and backward passes, with no length requirement.
/// Throws Error("text too uniform for MTLD") when a pass has no factors.
double mtld(const std::vector<std::string>& tokens, double threshold = kMtldThreshold);

struct LexicalScores {
  std::size_t n = 0;  // tokens
  std::size_t v = 0;  // types
  std::size_t unique_stems = 0;  // Porter stems, the lemma proxy
  double ttr = 0;
  double maas = 0;
  std::optional<double> hdd;   // absent below 42 tokens
  std::optional<double> mtld;  // absent below 50 tokens or when undefined
};

/// Tokens are lower-cased words (no stopword removal, no stemming).
LexicalScores lexical_diversity(const std::vector<std::string>& tokens);
LexicalScores lexical_diversity_text(std::string_view text);

struct LexicalReport {
  std::vector<std::string> doc_ids;
  std::vector<LexicalScores> docs;
  double mean_ttr = 0;
  double mean_maas = 0;
  std::optional<double> mean_hdd;   // over docs where defined
  std::optional<double> mean_mtld;  // over docs where defined
  std::size_t hdd_docs = 0;
  std::size_t mtld_docs = 0;
  double mean_unique = 0;
  double mean_unique_stems = 0;
  /// Unique-stem counts stand in for lemmatised unique words.
  static constexpr bool kLemmaIsStemProxy = true;

  std::string to_tsv(int decimals = 4) const;
  std::string to_json() const;
};

/// Throws Error("empty corpus").
LexicalReport lexical_report(const forge::Corpus& corpus, std::size_t jobs = 1);

}  // namespace synthcoll::stats
