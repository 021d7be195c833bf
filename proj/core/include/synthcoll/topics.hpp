#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace synthcoll {

/// A search topic. `id` has no whitespace and `description` is never blank.
struct Topic {
  std::string id;
  std::string title;
  std::string description;
  std::optional<std::string> narrative;

  friend bool operator==(const Topic&, const Topic&) = default;
};

enum class TopicFormat { kTrecSgml, kJsonl };

/// Accepts "trec", "sgml", "trec-sgml", "jsonl".
TopicFormat parse_topic_format(std::string_view name);

/// Parses TREC <top> blocks or topic JSONL. SGML parsing is lenient:
/// inner tags need not be closed, tag names are case-insensitive, field
/// order is free and runs of whitespace inside a field collapse to one space.
/// Throws ParseError on a block without <num>/<desc> (with its byte offset)
/// or on a duplicate id.
std::vector<Topic> parse_topics(std::string_view input, TopicFormat format);
std::vector<Topic> parse_topics(std::istream& input, TopicFormat format);
std::vector<Topic> load_topics(const std::string& path, TopicFormat format);

std::string serialize_topics(const std::vector<Topic>& topics,
                             TopicFormat format);

/// Deterministic keyword selector standing in for an NER tagger.
///
/// Candidates are tokens with at least one letter that are not function
/// words. They are ranked by: capitalised and not description-initial
/// first, then lowest stem-family frequency in general English, then
/// position. The top `max_terms` are masked.
struct KeywordRule {
  std::size_t max_terms = 1;
};

struct MaskedTopic {
  std::string source_topic_id;
  std::string masked_text;  // contains masked_terms.size() "[MASK]" markers
  std::vector<std::string> masked_terms;  // surface strings, text order
};

inline constexpr std::string_view kMaskToken = "[MASK]";

/// Throws PreconditionError("unmaskable description") when no candidate
/// survives the function-word filter.
MaskedTopic mask_description(const Topic& topic,
                             const KeywordRule& rule = KeywordRule{});

/// Substitutes masked_terms back into masked_text, in order.
std::string unmask(const MaskedTopic& masked);

}  // namespace synthcoll
