#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "synthcoll/forge/document.hpp"

namespace synthcoll::stats {

/// Words are analyzer tokens (letter/digit runs) with no stopword removal
/// or stemming. Documents are measured on title plus body.
std::vector<std::string_view> words(std::string_view text);

struct DocStructure {
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::vector<std::size_t> words_per_sentence;
};

DocStructure doc_structure(std::string_view text);

struct StructureReport {
  std::size_t doc_count = 0;
  std::size_t total_words = 0;
  double mean_words_per_doc = 0;
  double std_words_per_doc = 0;
  double mean_sentences_per_doc = 0;
  double std_sentences_per_doc = 0;
  double mean_words_per_sentence = 0;
  double median_words_per_sentence = 0;
  double std_words_per_sentence = 0;
  std::size_t max_words_per_doc = 0;
  std::size_t min_words_per_doc = 0;

  std::string to_tsv(int decimals = 4) const;
  std::string to_json() const;
};

/// Population standard deviations. Throws Error("empty corpus").
StructureReport structure_stats(const std::vector<std::string>& texts, std::size_t jobs = 1);
StructureReport structure_stats(const forge::Corpus& corpus, std::size_t jobs = 1);

/// Population mean and standard deviation.
struct MeanStd {
  double mean = 0;
  double std = 0;
};
MeanStd mean_std(const std::vector<double>& values);

}  // namespace synthcoll::stats
