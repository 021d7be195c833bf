#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace synthcoll::genclient {

enum class PromptKind {
  kInit,             // "<description>. Can you write a <document type> about that?"
  kSubtopics,        // "Can you write <count> subtopics related to this? ..."
  kDocFromSubtopic,  // "Can you write a long text with a title about <subtopic>, ..."
  kRandomDoc,        // "Write me a <document type> about any topic"
  kAlteredTopics,    // "Can you generate <count> variants of the next sentence ..."
};

std::string_view prompt_kind_name(PromptKind kind);
PromptKind parse_prompt_kind(std::string_view name);

using Bindings = std::map<std::string, std::string, std::less<>>;

/// Raw template text with `{placeholder}` markers.
std::string_view prompt_template(PromptKind kind);

/// Placeholders a template needs. `count` is the only optional one; it
/// defaults to 100 for SUBTOPICS and 10 for ALTERED_TOPICS.
std::vector<std::string> prompt_placeholders(PromptKind kind);

/// Substitutes every placeholder. Throws PreconditionError naming the first
/// unbound placeholder, or when a binding value itself contains a
/// `{placeholder}` marker.
std::string render_prompt(PromptKind kind, const Bindings& bindings);

}  // namespace synthcoll::genclient
