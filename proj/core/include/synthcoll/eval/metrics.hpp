#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synthcoll/forge/qrels.hpp"
#include "synthcoll/retrieval/run.hpp"

namespace synthcoll::eval {

/// Relevant docs in the first min(k, |slice|) entries, divided by k.
double precision_at_k(const std::vector<RunEntry>& slice, const Qrels& qrels,
                      std::string_view topic_id, std::size_t k);
/// (1/R) * sum of precision at the rank of each relevant doc retrieved at
/// rank <= cutoff. 0 when R == 0.
double average_precision(const std::vector<RunEntry>& slice, const Qrels& qrels,
                         std::string_view topic_id, std::size_t cutoff = 1000);
/// Precision over the first R entries. 0 when R == 0.
double r_precision(const std::vector<RunEntry>& slice, const Qrels& qrels,
                   std::string_view topic_id);

/// Metric identifiers: "map", "rprec", "P.<k>" (also accepted: P_k, P@k).
struct MetricId {
  enum class Kind { kMap, kRPrec, kPrecision } kind = Kind::kMap;
  std::size_t k = 0;

  std::string name() const;
  friend auto operator<=>(const MetricId&, const MetricId&) = default;
};
MetricId parse_metric(std::string_view name);
/// Comma-separated list; throws PreconditionError on unknown names.
std::vector<MetricId> parse_metric_list(std::string_view list);

struct TopicMetrics {
  std::map<std::size_t, double> p_at;
  double ap = 0;
  double rprec = 0;
  std::size_t num_rel = 0;
  std::size_t num_ret = 0;
  std::size_t num_rel_ret = 0;

  double value(const MetricId& m) const;
};

struct MetricReport {
  std::string run_tag;
  std::vector<std::size_t> ks;
  std::size_t cutoff = 1000;
  std::map<std::string, TopicMetrics, std::less<>> per_topic;
  /// Run topics with no relevant documents in the qrels, so excluded.
  std::vector<std::string> flagged;
  TopicMetrics mean;

  double value(const MetricId& m) const { return mean.value(m); }
  std::size_t evaluated_topics() const noexcept { return per_topic.size(); }

  /// "topic<TAB>metric<TAB>value" rows: every evaluated topic, then "all".
  std::string to_tsv(const std::vector<MetricId>& metrics, int decimals = 4) const;
  /// Full-precision JSON with per-topic values, means and flagged topics.
  std::string to_json() const;
};

/// Per-topic metrics over run topics with R >= 1 and their arithmetic
/// means. Precision depths in `ks` are always computed; rprec and AP too.
MetricReport evaluate_run(const Run& run, const Qrels& qrels,
                          const std::vector<std::size_t>& ks = {10, 100},
                          std::size_t cutoff = 1000);

}  // namespace synthcoll::eval
