#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synthcoll/forge/document.hpp"
#include "synthcoll/forge/qrels.hpp"

namespace synthcoll::eval {

struct CollectionStats {
  std::size_t documents = 0;
  std::size_t topics = 0;
  std::size_t relevant = 0;         // positive judgments
  std::size_t unique_relevant = 0;  // docs relevant to at least one topic
  double relevant_ratio = 0;        // relevant / documents
  double mean_relevant_per_topic = 0;
  /// Per-topic spread; absent when only totals are known.
  std::optional<double> std_relevant_per_topic;  // population
  std::optional<std::size_t> min_relevant_per_topic;
  std::optional<std::size_t> max_relevant_per_topic;
  std::map<std::string, std::size_t> documents_by_category;

  std::string to_tsv(int decimals = 4) const;
  std::string to_json() const;
};

/// Counts documents and positive judgments. Topics are those with at
/// least one positive judgment.
CollectionStats collection_stats(const forge::Corpus& corpus, const Qrels& qrels);

/// From bare counts, e.g. figures reported for a collection that is not
/// available. `relevant_per_topic` may be empty when only totals are known.
CollectionStats collection_stats_from_counts(std::size_t documents, std::size_t topics,
                                             std::size_t relevant,
                                             const std::vector<std::size_t>& relevant_per_topic = {});

/// JSON {"documents":N,"topics":T,"relevant":R} and/or
/// {"relevant_per_topic":[...]}; optional "unique_relevant".
CollectionStats collection_stats_from_manifest(std::string_view json_text);

}  // namespace synthcoll::eval
