#include "synthcoll/forge/document.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <unordered_set>

#include "synthcoll/error.hpp"

namespace synthcoll::forge {

namespace {

using nlohmann::ordered_json;

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

std::optional<std::string> opt_string(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

}  // namespace

std::string_view category_name(Category c) {
  switch (c) {
    case Category::kInitRelevant:
      return "INIT_RELEVANT";
    case Category::kSubtopicRelevant:
      return "SUBTOPIC_RELEVANT";
    case Category::kTrickyNonrel:
      return "TRICKY_NONREL";
    case Category::kRandom:
      return "RANDOM";
  }
  return "RANDOM";
}

Category parse_category(std::string_view name) {
  for (const auto c : {Category::kInitRelevant, Category::kSubtopicRelevant,
                       Category::kTrickyNonrel, Category::kRandom}) {
    if (category_name(c) == name) return c;
  }
  if (name == "TNR") return Category::kTrickyNonrel;
  throw PreconditionError("unknown document category '" + std::string(name) +
                          "'");
}

char category_code(Category c) {
  switch (c) {
    case Category::kInitRelevant:
      return 'I';
    case Category::kSubtopicRelevant:
      return 'S';
    case Category::kTrickyNonrel:
      return 'T';
    case Category::kRandom:
      return 'R';
  }
  return 'R';
}

bool is_relevant_category(Category c) noexcept {
  return c == Category::kInitRelevant || c == Category::kSubtopicRelevant;
}

std::string GeneratedDoc::full_text() const {
  if (!title || title->empty()) return body;
  return *title + "\n\n" + body;
}

std::string make_doc_id(const std::optional<std::string>& topic_id,
                        Category category, std::uint32_t ordinal) {
  std::string id = "G-";
  id += topic_id ? *topic_id : std::string("R");
  id += '-';
  id += category_code(category);
  id += '-';
  id += std::to_string(ordinal);
  return id;
}

std::optional<ParsedDocId> parse_doc_id(std::string_view doc_id) {
  if (doc_id.size() < 7 || doc_id.substr(0, 2) != "G-") return std::nullopt;
  const auto last_dash = doc_id.rfind('-');
  if (last_dash < 4 || doc_id[last_dash - 2] != '-') return std::nullopt;
  const char code = doc_id[last_dash - 1];
  std::uint32_t ordinal = 0;
  const auto digits = doc_id.substr(last_dash + 1);
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), ordinal);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    return std::nullopt;
  }
  const auto topic = doc_id.substr(2, last_dash - 2 - 2);
  if (topic.empty()) return std::nullopt;
  ParsedDocId out{std::nullopt, Category::kRandom, ordinal};
  switch (code) {
    case 'I':
      out.category = Category::kInitRelevant;
      break;
    case 'S':
      out.category = Category::kSubtopicRelevant;
      break;
    case 'T':
      out.category = Category::kTrickyNonrel;
      break;
    case 'R':
      out.category = Category::kRandom;
      break;
    default:
      return std::nullopt;
  }
  if (out.category != Category::kRandom) out.topic_id = std::string(topic);
  return out;
}

void validate_document(const GeneratedDoc& doc) {
  const auto fail = [&](const std::string& why) {
    throw InvariantError("document '" + doc.doc_id + "': " + why);
  };
  if (doc.doc_id.empty()) throw InvariantError("document without doc_id");
  if ((doc.category == Category::kRandom) != !doc.topic_id.has_value()) {
    fail("topic_id must be absent exactly for RANDOM documents");
  }
  if (doc.category == Category::kTrickyNonrel && !doc.variant_text) {
    fail("TRICKY_NONREL document without variant_text");
  }
  if (doc.category == Category::kSubtopicRelevant && !doc.subtopic) {
    fail("SUBTOPIC_RELEVANT document without subtopic");
  }
  if (trim(doc.body).empty()) fail("empty body");
  if (doc.provenance.model_id.empty()) fail("provenance without model_id");
}

void validate_corpus(const Corpus& corpus) {
  std::unordered_set<std::string_view> ids;
  for (const auto& d : corpus) {
    validate_document(d);
    if (!ids.insert(d.doc_id).second) {
      throw InvariantError("duplicate doc_id '" + d.doc_id + "'");
    }
  }
}

void split_title_body(std::string_view reply, std::optional<std::string>& title,
                      std::string& body) {
  reply = trim(reply);
  title.reset();
  const auto eol = reply.find('\n');
  const auto first = trim(reply.substr(0, eol));
  constexpr std::string_view kLabel = "title:";
  bool labelled = first.size() >= kLabel.size();
  for (std::size_t i = 0; labelled && i < kLabel.size(); ++i) {
    const char c = first[i];
    labelled = (c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c) == kLabel[i];
  }
  if (labelled && eol != std::string_view::npos) {
    auto t = trim(first.substr(kLabel.size()));
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') {
      t = t.substr(1, t.size() - 2);
    }
    const auto rest = trim(reply.substr(eol + 1));
    if (!t.empty() && !rest.empty()) {
      title = std::string(t);
      body = std::string(rest);
      return;
    }
  }
  body = std::string(reply);
}

std::string document_to_json(const GeneratedDoc& doc) {
  ordered_json j;
  j["doc_id"] = doc.doc_id;
  j["category"] = category_name(doc.category);
  if (doc.topic_id) j["topic_id"] = *doc.topic_id;
  if (doc.subtopic) j["subtopic"] = *doc.subtopic;
  if (doc.variant_text) j["variant_text"] = *doc.variant_text;
  if (doc.title) j["title"] = *doc.title;
  j["body"] = doc.body;
  ordered_json p;
  p["model_id"] = doc.provenance.model_id;
  p["prompt_tokens"] = doc.provenance.prompt_tokens;
  p["completion_tokens"] = doc.provenance.completion_tokens;
  if (doc.provenance.usage_estimated) p["usage_estimated"] = true;
  p["prompt_kind"] = doc.provenance.prompt_kind;
  p["created_at"] = doc.provenance.created_at;
  j["provenance"] = std::move(p);
  return j.dump();
}

GeneratedDoc document_from_json(std::string_view line) {
  const auto j = ordered_json::parse(line);
  GeneratedDoc d;
  d.doc_id = j.at("doc_id").get<std::string>();
  d.category = parse_category(j.at("category").get<std::string>());
  d.topic_id = opt_string(j, "topic_id");
  d.subtopic = opt_string(j, "subtopic");
  d.variant_text = opt_string(j, "variant_text");
  d.title = opt_string(j, "title");
  d.body = j.at("body").get<std::string>();
  if (j.contains("provenance")) {
    const auto& p = j.at("provenance");
    d.provenance.model_id = p.value("model_id", std::string{});
    d.provenance.prompt_tokens = p.value("prompt_tokens", std::uint64_t{0});
    d.provenance.completion_tokens =
        p.value("completion_tokens", std::uint64_t{0});
    d.provenance.usage_estimated = p.value("usage_estimated", false);
    d.provenance.prompt_kind = p.value("prompt_kind", std::string{});
    d.provenance.created_at = p.value("created_at", std::string{});
  }
  return d;
}

std::string write_corpus_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& d : corpus) {
    out += document_to_json(d);
    out += '\n';
  }
  return out;
}

Corpus read_corpus_jsonl(std::string_view text) {
  Corpus out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(document_from_json(line));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("corpus line " + std::to_string(line_no) + ": " +
                           e.what(),
                       line_no);
    } catch (const PreconditionError& e) {
      throw ParseError("corpus line " + std::to_string(line_no) + ": " +
                           e.what(),
                       line_no);
    }
  }
  return out;
}

Corpus load_corpus(const std::string& path) {
  return read_corpus_jsonl(read_file(path));
}

Corpus load_corpus_any(const std::string& path) {
  const std::string text = read_file(path);
  const auto body = trim(text);
  if (!body.empty() && body.front() == '<') return import_trec(text);
  return read_corpus_jsonl(text);
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << write_corpus_jsonl(corpus);
}

std::string export_trec(const Corpus& corpus) {
  std::string out;
  for (const auto& d : corpus) {
    out += "<DOC>\n<DOCNO>";
    out += d.doc_id;
    out += "</DOCNO>\n<TEXT>";
    out += d.full_text();
    out += "</TEXT>\n</DOC>\n";
  }
  return out;
}

namespace {

std::string_view between(std::string_view block, std::string_view open,
                         std::string_view close) {
  const auto a = block.find(open);
  if (a == std::string_view::npos) return {};
  const auto start = a + open.size();
  const auto b = block.find(close, start);
  return block.substr(start, b == std::string_view::npos ? std::string_view::npos
                                                         : b - start);
}

bool looks_like_heading(std::string_view paragraph) {
  if (paragraph.empty() || paragraph.size() > 200) return false;
  if (paragraph.find('\n') != std::string_view::npos) return false;
  const char last = paragraph.back();
  return last != '.' && last != '!' && last != '?' && last != ':';
}

}  // namespace

Corpus import_trec(std::string_view text) {
  Corpus out;
  std::size_t pos = 0;
  while (true) {
    const auto open = text.find("<DOC>", pos);
    if (open == std::string_view::npos) break;
    auto close = text.find("</DOC>", open);
    if (close == std::string_view::npos) {
      throw ParseError("unterminated <DOC> at byte " + std::to_string(open), 0,
                       open);
    }
    const auto block = text.substr(open, close - open);
    pos = close + 6;
    GeneratedDoc d;
    d.doc_id = std::string(trim(between(block, "<DOCNO>", "</DOCNO>")));
    if (d.doc_id.empty()) {
      throw ParseError("<DOC> without <DOCNO> at byte " + std::to_string(open),
                       0, open);
    }
    std::string content;
    for (std::size_t p = 0;;) {
      const auto a = block.find("<TEXT>", p);
      if (a == std::string_view::npos) break;
      const auto b = block.find("</TEXT>", a);
      const auto piece = block.substr(
          a + 6, b == std::string_view::npos ? std::string_view::npos : b - a - 6);
      if (!content.empty()) content += "\n\n";
      content += piece;
      if (b == std::string_view::npos) break;
      p = b + 7;
    }
    const auto headline = trim(between(block, "<HEADLINE>", "</HEADLINE>"));
    const auto body_view = trim(content);
    if (!headline.empty()) {
      d.title = std::string(headline);
      d.body = std::string(body_view);
    } else {
      const auto split = body_view.find("\n\n");
      const auto first = body_view.substr(0, split);
      if (split != std::string_view::npos && looks_like_heading(first)) {
        d.title = std::string(first);
        d.body = std::string(trim(body_view.substr(split + 2)));
      } else {
        d.body = std::string(body_view);
      }
    }
    if (auto parsed = parse_doc_id(d.doc_id)) {
      d.category = parsed->category;
      d.topic_id = parsed->topic_id;
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace synthcoll::forge
