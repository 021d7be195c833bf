#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace synthcoll::forge {

enum class Category { kInitRelevant, kSubtopicRelevant, kTrickyNonrel, kRandom };

/// INIT_RELEVANT, SUBTOPIC_RELEVANT, TRICKY_NONREL, RANDOM.
std::string_view category_name(Category c);
Category parse_category(std::string_view name);
/// One-letter code used inside doc ids: I, S, T, R.
char category_code(Category c);
bool is_relevant_category(Category c) noexcept;

struct Provenance {
  std::string model_id;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  bool usage_estimated = false;
  std::string prompt_kind;
  std::string created_at;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// One generated document. Invariants (checked by validate_document):
/// topic_id is absent exactly for RANDOM, TRICKY_NONREL carries
/// variant_text, SUBTOPIC_RELEVANT carries subtopic, body is non-empty.
struct GeneratedDoc {
  std::string doc_id;
  Category category = Category::kRandom;
  std::optional<std::string> topic_id;
  std::optional<std::string> subtopic;
  std::optional<std::string> variant_text;
  std::optional<std::string> title;
  std::string body;
  Provenance provenance;

  /// Title and body separated by a blank line, or the body alone.
  std::string full_text() const;

  friend bool operator==(const GeneratedDoc&, const GeneratedDoc&) = default;
};

using Corpus = std::vector<GeneratedDoc>;

/// "G-<topic id|R>-<category code>-<ordinal>", e.g. "G-402-S-1".
std::string make_doc_id(const std::optional<std::string>& topic_id,
                        Category category, std::uint32_t ordinal);

struct ParsedDocId {
  std::optional<std::string> topic_id;
  Category category;
  std::uint32_t ordinal;
};
/// Inverse of make_doc_id; nullopt for ids outside the scheme.
std::optional<ParsedDocId> parse_doc_id(std::string_view doc_id);

/// Throws InvariantError describing the first violated invariant.
void validate_document(const GeneratedDoc& doc);
/// validate_document on every doc plus doc_id uniqueness.
void validate_corpus(const Corpus& corpus);

/// Splits a generator reply into title and body: a leading "Title: ..." line
/// becomes the title, everything after it the body.
void split_title_body(std::string_view reply, std::optional<std::string>& title,
                      std::string& body);

std::string document_to_json(const GeneratedDoc& doc);
GeneratedDoc document_from_json(std::string_view line);

/// One JSON object per line, corpus order preserved.
std::string write_corpus_jsonl(const Corpus& corpus);
Corpus read_corpus_jsonl(std::string_view text);
Corpus load_corpus(const std::string& path);
/// Picks JSONL or TREC SGML from the first non-blank character.
Corpus load_corpus_any(const std::string& path);
void save_corpus(const Corpus& corpus, const std::string& path);

/// <DOC>\n<DOCNO>id</DOCNO>\n<TEXT>title\n\nbody</TEXT>\n</DOC>\n per doc.
std::string export_trec(const Corpus& corpus);

/// Reads <DOC> blocks (DOCNO plus TEXT, and HEADLINE as a title when
/// present). A first TEXT paragraph that is one short line without
/// sentence-final punctuation is read back as the title. Category and topic
/// are recovered from ids that follow the make_doc_id scheme; other ids
/// import as RANDOM.
Corpus import_trec(std::string_view text);

}  // namespace synthcoll::forge
