#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synthcoll/forge/document.hpp"

namespace synthcoll::eval {

struct Annotation {
  std::string topic_id;
  std::string doc_id;
  int label = 0;  // human judgment, 0 or 1

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// "topic_id,doc_id,label" rows; a header row is skipped when present.
std::vector<Annotation> read_annotations_csv(std::string_view text);
std::vector<Annotation> load_annotations(const std::string& path);
std::string write_annotations_csv(const std::vector<Annotation>& annotations);

struct AuditRow {
  std::string topic_id;
  std::size_t relevant_confirmed = 0;  // human 1 on INIT/SUBTOPIC docs
  std::size_t relevant_annotated = 0;
  std::size_t nonrelevant_confirmed = 0;  // human 0 on TRICKY docs
  std::size_t nonrelevant_annotated = 0;

  std::optional<double> relevance_rate() const;
  std::optional<double> nonrelevance_rate() const;
};

struct AuditReport {
  std::vector<AuditRow> rows;  // sorted by topic id
  /// Means of the per-topic rates over topics where the rate is defined.
  std::optional<double> macro_relevance;
  std::optional<double> macro_nonrelevance;
  /// Confirmed over annotated, pooled across topics.
  std::optional<double> pooled_relevance;
  std::optional<double> pooled_nonrelevance;
  std::size_t ignored_random = 0;  // annotations on RANDOM docs

  std::string to_tsv(int decimals = 4) const;
  std::string to_json() const;
};

/// Throws Error for an annotation whose doc is not in the corpus, whose
/// topic differs from the doc's topic, or whose label is not 0/1.
AuditReport judgment_audit(const forge::Corpus& corpus,
                           const std::vector<Annotation>& annotations);

}  // namespace synthcoll::eval
