#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "synthcoll/forge/document.hpp"
#include "synthcoll/stats/syllables.hpp"

namespace synthcoll::stats {

struct ReadabilityCounts {
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::size_t syllables = 0;
  std::size_t letters = 0;  // letters and digits inside words
};

struct ReadabilityScores {
  ReadabilityCounts counts;
  double kincaid = 0;
  double fre = 0;
  double ari = 0;
};

ReadabilityCounts readability_counts(std::string_view text,
                                     const SyllableCounter& syllables = count_syllables);
/// The three formulas applied to the counts; PreconditionError when words
/// or sentences are zero.
ReadabilityScores readability_from_counts(const ReadabilityCounts& c);
/// Throws Error("empty document") when the text has no words.
ReadabilityScores readability(std::string_view text,
                              const SyllableCounter& syllables = count_syllables);

struct ReadabilityReport {
  std::vector<std::string> doc_ids;
  std::vector<ReadabilityScores> docs;
  double mean_kincaid = 0;
  double mean_fre = 0;
  double mean_ari = 0;
  std::size_t skipped_empty = 0;

  std::string to_tsv(int decimals = 4) const;
  std::string to_json() const;
};

/// Documents without words are skipped and counted. Throws Error when no
/// document can be scored.
ReadabilityReport readability_report(const forge::Corpus& corpus, std::size_t jobs = 1);

}  // namespace synthcoll::stats
