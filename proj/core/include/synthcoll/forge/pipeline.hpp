#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "synthcoll/forge/document.hpp"
#include "synthcoll/forge/journal.hpp"
#include "synthcoll/forge/qrels.hpp"
#include "synthcoll/genclient/ledger.hpp"
#include "synthcoll/genclient/provider.hpp"
#include "synthcoll/topics.hpp"

namespace synthcoll::forge {

struct ForgeConfig {
  std::size_t subtopics_requested = 100;
  std::size_t docs_per_subtopic = 1;
  std::size_t variants_per_topic = 10;
  std::size_t docs_per_variant = 5;
  std::size_t random_docs_total = 0;
  std::string document_type = "long text";
  /// Mock provider seed; also part of the journal fingerprint.
  std::string seed = "0";
  std::uint32_t max_output_tokens = 2048;
  double temperature = 1.0;
  KeywordRule mask;
  /// Topics processed at once (bounded provider concurrency).
  std::size_t concurrency = 4;
};

/// Throws PreconditionError on unusable values (empty document type,
/// zero concurrency or token budget).
void validate_config(const ForgeConfig& cfg);

struct TopicReport {
  std::string topic_id;
  bool failed = false;
  std::string failure;
  std::size_t subtopics_obtained = 0;
  std::size_t subtopic_shortfall = 0;
  std::size_t variants_obtained = 0;
  std::size_t variant_shortfall = 0;
  std::string mask_error;  // set when no TNR docs could be produced
  std::size_t relevant_docs = 0;
  std::size_t tricky_docs = 0;
};

struct ForgeOptions {
  /// Empty: no journal, nothing survives an interruption.
  std::string journal_path;
  /// Stop (complete == false) once this many provider calls were spent.
  std::optional<std::size_t> max_new_units;
  /// Timestamp source for provenance.created_at. Defaults to a fixed epoch
  /// for deterministic providers and UTC wall-clock time otherwise.
  std::function<std::string()> clock;
};

struct ForgeResult {
  bool complete = false;
  Corpus corpus;
  Qrels qrels;
  genclient::UsageLedger ledger;
  std::vector<TopicReport> topics;
  std::size_t new_units = 0;     // provider calls made by this run
  std::size_t reused_units = 0;  // units taken from the journal
};

/// Full pipeline: for each topic the relevant set and the TNR set, then
/// random documents. Topics run in parallel; the output is assembled in
/// (topic, phase, ordinal) order, so it does not depend on scheduling.
/// Provider failures that survive retries become CheckpointError; the
/// journal keeps every completed unit.
ForgeResult run_forge(const std::vector<Topic>& topics, const ForgeConfig& cfg,
                      const genclient::Provider& provider,
                      const ForgeOptions& options = {});

/// Relevant set of one topic: the INIT doc, then one subtopic list and the
/// subtopic docs. Throws Error when the subtopic list cannot be parsed.
std::vector<GeneratedDoc> forge_topic(const Topic& topic,
                                      const ForgeConfig& cfg,
                                      const genclient::Provider& provider,
                                      genclient::UsageLedger* ledger = nullptr);

/// TNR set: one variant list, then docs_per_variant docs per variant.
/// `shortfall`, when given, receives the number of missing variants.
std::vector<GeneratedDoc> forge_tricky(const Topic& topic,
                                       const MaskedTopic& masked,
                                       const ForgeConfig& cfg,
                                       const genclient::Provider& provider,
                                       genclient::UsageLedger* ledger = nullptr,
                                       std::size_t* shortfall = nullptr);

std::vector<GeneratedDoc> forge_random(std::size_t count, const ForgeConfig& cfg,
                                       const genclient::Provider& provider,
                                       genclient::UsageLedger* ledger = nullptr);

/// Identifies a (topics, config, provider) combination inside a journal.
std::string run_fingerprint(const std::vector<Topic>& topics,
                            const ForgeConfig& cfg,
                            const genclient::Provider& provider);

struct PipelinePosition {
  bool complete = false;
  std::size_t topic_index = 0;  // == topics.size() while in the random phase
  UnitKey next;                 // first unit not yet journaled
  std::size_t journaled_units = 0;
};

/// First unit a rerun would generate, walking the same plan as run_forge.
PipelinePosition checkpoint_resume(const std::string& journal_path,
                                   const std::vector<Topic>& topics,
                                   const ForgeConfig& cfg);

}  // namespace synthcoll::forge
