#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "synthcoll/forge/document.hpp"
#include "synthcoll/text/analyzer.hpp"

namespace synthcoll::retrieval {

struct Posting {
  std::uint32_t doc;  // ordinal
  std::uint32_t tf;

  friend bool operator==(const Posting&, const Posting&) = default;
};

struct IndexDoc {
  std::string doc_id;
  std::string text;
};

/// Immutable inverted index. Doc ordinals follow ascending doc_id, so the
/// index does not depend on input order and ordinal order is the global
/// tie-break order.
class Index {
 public:
  /// Throws Error("empty corpus") on no documents, InvariantError on a
  /// duplicate doc_id.
  static Index build(std::vector<IndexDoc> docs, const text::Analyzer& analyzer);
  static Index build(const forge::Corpus& corpus, const text::Analyzer& analyzer);

  std::uint32_t doc_count() const noexcept {
    return static_cast<std::uint32_t>(doc_ids_.size());
  }
  double avgdl() const noexcept { return avgdl_; }
  std::uint32_t doc_length(std::uint32_t ordinal) const { return doc_lengths_.at(ordinal); }
  const std::string& doc_id(std::uint32_t ordinal) const { return doc_ids_.at(ordinal); }
  const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
  const std::vector<std::uint32_t>& doc_lengths() const noexcept { return doc_lengths_; }

  /// Empty span when the term is not indexed.
  const std::vector<Posting>& postings(std::string_view term) const;
  std::uint32_t df(std::string_view term) const {
    return static_cast<std::uint32_t>(postings(term).size());
  }
  std::size_t term_count() const noexcept { return postings_.size(); }
  const std::map<std::string, std::vector<Posting>, std::less<>>& all_postings() const noexcept {
    return postings_;
  }

  const text::Analyzer& analyzer() const noexcept { return analyzer_; }

  /// Binary format "SCIDX001"; includes the analyzer settings.
  void save(const std::string& path) const;
  static Index load(const std::string& path);

 private:
  text::Analyzer analyzer_;
  std::vector<std::string> doc_ids_;
  std::vector<std::uint32_t> doc_lengths_;
  double avgdl_ = 0;
  std::map<std::string, std::vector<Posting>, std::less<>> postings_;
};

}  // namespace synthcoll::retrieval
