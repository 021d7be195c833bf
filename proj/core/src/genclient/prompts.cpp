#include "synthcoll/genclient/prompts.hpp"

#include <regex>

#include "synthcoll/error.hpp"

namespace synthcoll::genclient {

namespace {

struct TemplateSpec {
  PromptKind kind;
  std::string_view name;
  std::string_view text;
  std::string_view default_count;  // empty when there is no count
};

// The initialization template joins the description and the question with
// ". "; a description that already ends in a period is not doubled (see
// render_prompt).
constexpr TemplateSpec kTemplates[] = {
    {PromptKind::kInit, "INIT",
     "{description}. Can you write a {document_type} about that?", ""},
    {PromptKind::kSubtopics, "SUBTOPICS",
     "Can you write {count} subtopics related to this? Please be as specific "
     "as possible.",
     "100"},
    {PromptKind::kDocFromSubtopic, "DOC_FROM_SUBTOPIC",
     "Can you write a long text with a title about {subtopic}, within the "
     "scope of {description} ?",
     ""},
    {PromptKind::kRandomDoc, "RANDOM_DOC",
     "Write me a {document_type} about any topic", ""},
    {PromptKind::kAlteredTopics, "ALTERED_TOPICS",
     "Can you generate {count} variants of the next sentence by filling "
     "[MASK]: {masked_description}\n\nExample: {description}",
     "10"},
};

const TemplateSpec& spec_for(PromptKind kind) {
  for (const auto& t : kTemplates) {
    if (t.kind == kind) return t;
  }
  throw PreconditionError("unknown prompt kind");
}

const std::regex& placeholder_re() {
  static const std::regex re(R"(\{([a-z_]+)\})");
  return re;
}

}  // namespace

std::string_view prompt_kind_name(PromptKind kind) {
  return spec_for(kind).name;
}

PromptKind parse_prompt_kind(std::string_view name) {
  for (const auto& t : kTemplates) {
    if (t.name == name) return t.kind;
  }
  throw PreconditionError("unknown prompt kind '" + std::string(name) + "'");
}

std::string_view prompt_template(PromptKind kind) { return spec_for(kind).text; }

std::vector<std::string> prompt_placeholders(PromptKind kind) {
  std::vector<std::string> out;
  const std::string text(spec_for(kind).text);
  for (std::sregex_iterator it(text.begin(), text.end(), placeholder_re()), end;
       it != end; ++it) {
    out.push_back((*it)[1].str());
  }
  return out;
}

std::string render_prompt(PromptKind kind, const Bindings& bindings) {
  const auto& spec = spec_for(kind);
  for (const auto& [key, value] : bindings) {
    if (std::regex_search(value, placeholder_re())) {
      throw PreconditionError("binding '" + key +
                              "' contains an unresolved placeholder");
    }
  }
  const std::string text(spec.text);
  std::string out;
  std::size_t copied = 0;
  for (std::sregex_iterator it(text.begin(), text.end(), placeholder_re()), end;
       it != end; ++it) {
    const auto& m = *it;
    const std::string name = m[1].str();
    out.append(text, copied, static_cast<std::size_t>(m.position(0)) - copied);
    copied = static_cast<std::size_t>(m.position(0) + m.length(0));
    auto found = bindings.find(name);
    std::string value;
    if (found != bindings.end()) {
      value = found->second;
    } else if (name == "count" && !spec.default_count.empty()) {
      value = std::string(spec.default_count);
    } else {
      throw PreconditionError("missing binding for placeholder '" + name + "'");
    }
    // "<description>." must not become "<description>.." when the source
    // sentence already carries its own terminator.
    if (kind == PromptKind::kInit && name == "description") {
      while (!value.empty() && value.back() == '.') value.pop_back();
    }
    out += value;
  }
  out.append(text, copied);
  return out;
}

}  // namespace synthcoll::genclient
