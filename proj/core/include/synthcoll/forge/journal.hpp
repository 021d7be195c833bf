#pragma once

#include <compare>
#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synthcoll/forge/document.hpp"
#include "synthcoll/genclient/ledger.hpp"

namespace synthcoll::forge {

/// Pipeline steps, in the order they run for one topic. RANDOM_DOC units
/// belong to the pseudo-topic "R".
enum class Phase {
  kInit,
  kSubtopics,
  kSubtopicDoc,
  kVariants,
  kTrickyDoc,
  kRandomDoc,
};

std::string_view phase_name(Phase p);
Phase parse_phase(std::string_view name);

struct UnitKey {
  std::string topic;  // topic id, or "R" for random documents
  Phase phase = Phase::kInit;
  std::uint32_t ordinal = 0;

  friend auto operator<=>(const UnitKey&, const UnitKey&) = default;
};

/// One completed unit of work. Document units carry `doc`; list units
/// carry `items` and `shortfall`; a non-empty `failure` marks a topic that
/// was abandoned at this unit.
struct JournalRecord {
  UnitKey key;
  genclient::Usage usage;
  bool usage_estimated = false;
  std::optional<GeneratedDoc> doc;
  std::vector<std::string> items;
  std::size_t shortfall = 0;
  std::string failure;
};

std::string record_to_json(const JournalRecord& r);
JournalRecord record_from_json(std::string_view line);

/// Append-only JSONL log. The first line is a header holding a fingerprint
/// of the run configuration; reopening with a different fingerprint fails.
/// Appends are serialised and flushed one line at a time.
class Journal {
 public:
  /// Reads any existing records, then opens for append. Throws ParseError
  /// naming the line of the first corrupt record, CheckpointError on a
  /// fingerprint mismatch.
  static Journal open(const std::string& path, const std::string& fingerprint);
  /// Read-only view of an existing journal (no fingerprint check).
  static Journal read(const std::string& path);

  Journal(Journal&& other) noexcept;
  Journal& operator=(Journal&&) = delete;

  const JournalRecord* find(const UnitKey& key) const;
  void append(const JournalRecord& record);
  std::size_t size() const;
  const std::string& fingerprint() const noexcept { return fingerprint_; }
  const std::string& path() const noexcept { return path_; }

 private:
  Journal() = default;

  std::string path_;
  std::string fingerprint_;
  mutable std::mutex mu_;
  std::map<UnitKey, JournalRecord> records_;
  std::ofstream out_;
};

}  // namespace synthcoll::forge
