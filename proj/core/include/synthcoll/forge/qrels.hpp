#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "synthcoll/forge/document.hpp"

namespace synthcoll {

struct QrelsEntry {
  std::string topic_id;
  std::string doc_id;
  int relevance = 0;

  friend bool operator==(const QrelsEntry&, const QrelsEntry&) = default;
};

/// Relevance judgments. Keeps insertion order for output and an index for
/// lookup; at most one entry per (topic_id, doc_id). Any relevance > 0 counts
/// as relevant.
class Qrels {
 public:
  /// Throws InvariantError on a duplicate (topic_id, doc_id).
  void add(QrelsEntry entry);

  const std::vector<QrelsEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Judged relevance, or -1 when the pair is unjudged.
  int judgment(std::string_view topic_id, std::string_view doc_id) const;
  bool is_relevant(std::string_view topic_id, std::string_view doc_id) const {
    return judgment(topic_id, doc_id) > 0;
  }
  std::size_t relevant_count(std::string_view topic_id) const;
  /// Topics with at least one entry, sorted.
  std::vector<std::string> topics() const;
  bool has_topic(std::string_view topic_id) const;

  /// Entries of one topic, in insertion order.
  std::vector<QrelsEntry> topic_entries(std::string_view topic_id) const;

  /// Keeps entries whose predicate returns true.
  template <class Pred>
  Qrels filtered(Pred keep) const {
    Qrels out;
    for (const auto& e : entries_) {
      if (keep(e)) out.add(e);
    }
    return out;
  }

  friend bool operator==(const Qrels& a, const Qrels& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<QrelsEntry> entries_;
  std::map<std::string, std::map<std::string, std::size_t, std::less<>>,
           std::less<>>
      index_;
};

/// "topic_id 0 doc_id relevance" lines, insertion order.
std::string write_qrels(const Qrels& qrels);
/// Accepts any whitespace separation and any iteration column. Throws
/// ParseError naming the line on malformed or duplicate rows.
Qrels read_qrels(std::string_view text);
Qrels load_qrels(const std::string& path);
void save_qrels(const Qrels& qrels, const std::string& path);

/// Judgments by construction: 1 for INIT/SUBTOPIC docs against their topic,
/// explicit 0 for TRICKY docs against their source topic, nothing for RANDOM.
/// Throws InvariantError when a RANDOM doc carries a topic_id.
Qrels assemble_qrels(const forge::Corpus& corpus);

}  // namespace synthcoll
