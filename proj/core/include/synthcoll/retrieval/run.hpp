#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace synthcoll {

/// One line of a TREC run file.
struct RunEntry {
  std::string topic_id;
  std::string doc_id;
  std::uint32_t rank = 0;  // 1-based
  double score = 0;
  std::string tag;

  friend bool operator==(const RunEntry&, const RunEntry&) = default;
};

using Run = std::vector<RunEntry>;

/// A run split by topic; each slice is in rank order.
using RunByTopic = std::map<std::string, std::vector<RunEntry>, std::less<>>;

/// Sorts by score (descending) then doc_id (ascending) and renumbers
/// ranks from 1. All entries must share one topic.
void rank_entries(std::vector<RunEntry>& entries);

/// "topic Q0 doc rank score tag" with the score printed to 6 decimals.
std::string format_run_line(const RunEntry& e);
std::string write_run(const Run& run);
void save_run(const Run& run, const std::string& path);

/// Validates: six columns, literal Q0, ranks 1..k consecutive per topic,
/// scores non-increasing with rank, unique (topic, doc). Errors are
/// ParseError naming the line.
Run read_run(std::string_view text);
Run load_run(const std::string& path);

RunByTopic group_by_topic(const Run& run);
Run flatten(const RunByTopic& by_topic);

}  // namespace synthcoll
