#include "synthcoll/topics.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <unordered_set>

#include "synthcoll/error.hpp"
#include "synthcoll/text/analyzer.hpp"
#include "synthcoll/text/lexicon.hpp"
#include "synthcoll/text/porter.hpp"
#include "synthcoll/text/stopwords.hpp"
#include "synthcoll/text/utf8.hpp"

namespace synthcoll {

namespace {

using nlohmann::json;

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool iequals_at(std::string_view hay, std::size_t pos, std::string_view needle) {
  if (pos + needle.size() > hay.size()) return false;
  for (std::size_t i = 0; i < needle.size(); ++i) {
    if (ascii_lower(hay[pos + i]) != needle[i]) return false;
  }
  return true;
}

std::size_t ifind(std::string_view hay, std::string_view needle,
                  std::size_t from) {
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    if (iequals_at(hay, i, needle)) return i;
  }
  return std::string_view::npos;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (const char c : trim(s)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string_view strip_label(std::string_view s, std::string_view label) {
  s = trim(s);
  if (iequals_at(s, 0, label)) s = trim(s.substr(label.size()));
  return s;
}

enum class Field { kNum, kTitle, kDesc, kNarr };

struct TagMatch {
  std::size_t pos;
  std::size_t len;
  std::optional<Field> field;  // nullopt for closing tags
};

// Next recognised tag (opening or closing) at or after `from`.
std::optional<TagMatch> next_tag(std::string_view block, std::size_t from) {
  static constexpr std::pair<std::string_view, Field> kOpen[] = {
      {"<num>", Field::kNum},
      {"<title>", Field::kTitle},
      {"<desc>", Field::kDesc},
      {"<narr>", Field::kNarr}};
  static constexpr std::string_view kClose[] = {"</num>", "</title>",
                                                "</desc>", "</narr>"};
  for (std::size_t i = block.find('<', from); i != std::string_view::npos;
       i = block.find('<', i + 1)) {
    for (const auto& [tag, field] : kOpen) {
      if (iequals_at(block, i, tag)) return TagMatch{i, tag.size(), field};
    }
    for (const auto tag : kClose) {
      if (iequals_at(block, i, tag)) return TagMatch{i, tag.size(), {}};
    }
  }
  return std::nullopt;
}

void validate_topic(const Topic& t, std::size_t line, std::size_t offset) {
  if (t.id.empty()) {
    throw ParseError("topic without id", line, offset);
  }
  if (std::any_of(t.id.begin(), t.id.end(), is_space)) {
    throw ParseError("topic id '" + t.id + "' contains whitespace", line,
                     offset);
  }
  if (trim(t.description).empty()) {
    throw ParseError("topic '" + t.id + "' has an empty description", line,
                     offset);
  }
}

Topic parse_sgml_block(std::string_view block, std::size_t offset) {
  Topic topic;
  bool have_num = false;
  bool have_desc = false;
  std::size_t cursor = 0;
  auto tag = next_tag(block, cursor);
  while (tag) {
    const std::size_t content_start = tag->pos + tag->len;
    auto next = next_tag(block, content_start);
    const std::size_t content_end = next ? next->pos : block.size();
    const auto content = block.substr(content_start, content_end - content_start);
    if (tag->field) {
      switch (*tag->field) {
        case Field::kNum:
          topic.id = collapse_whitespace(strip_label(content, "number:"));
          have_num = true;
          break;
        case Field::kTitle:
          topic.title = collapse_whitespace(strip_label(content, "topic:"));
          break;
        case Field::kDesc:
          topic.description =
              collapse_whitespace(strip_label(content, "description:"));
          have_desc = true;
          break;
        case Field::kNarr:
          topic.narrative =
              collapse_whitespace(strip_label(content, "narrative:"));
          break;
      }
    }
    tag = next;
  }
  if (!have_num || !have_desc) {
    const std::string partial = topic.id.empty() ? "?" : topic.id;
    throw ParseError("malformed topic block at byte " + std::to_string(offset) +
                         " (partial id '" + partial + "'): missing " +
                         (!have_num ? "<num>" : "<desc>"),
                     0, offset);
  }
  validate_topic(topic, 0, offset);
  return topic;
}

std::vector<Topic> parse_sgml(std::string_view input) {
  std::vector<Topic> topics;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = ifind(input, "<top>", pos);
    if (open == std::string_view::npos) break;
    const std::size_t body = open + 5;
    std::size_t close = ifind(input, "</top>", body);
    const std::size_t next_open = ifind(input, "<top>", body);
    // An unterminated block ends where the next one starts.
    std::size_t end = close;
    if (close == std::string_view::npos || (next_open != std::string_view::npos &&
                                            next_open < close)) {
      end = next_open == std::string_view::npos ? input.size() : next_open;
      pos = end;
    } else {
      pos = close + 6;
    }
    topics.push_back(parse_sgml_block(input.substr(body, end - body), open));
  }
  return topics;
}

std::vector<Topic> parse_jsonl(std::string_view input) {
  std::vector<Topic> topics;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < input.size()) {
    std::size_t eol = input.find('\n', pos);
    if (eol == std::string_view::npos) eol = input.size();
    const auto line = trim(input.substr(pos, eol - pos));
    const std::size_t offset = pos;
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("topic line " + std::to_string(line_no) +
                           ": invalid JSON: " + e.what(),
                       line_no, offset);
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("description")) {
      throw ParseError("topic line " + std::to_string(line_no) +
                           ": expected an object with id and description",
                       line_no, offset);
    }
    Topic t;
    try {
      t.id = j.at("id").is_string() ? j.at("id").get<std::string>()
                                    : j.at("id").dump();
      t.title = j.value("title", std::string{});
      t.description = j.at("description").get<std::string>();
      if (j.contains("narrative") && !j.at("narrative").is_null()) {
        t.narrative = j.at("narrative").get<std::string>();
      }
    } catch (const json::exception& e) {
      throw ParseError("topic line " + std::to_string(line_no) + ": " +
                           e.what(),
                       line_no, offset);
    }
    validate_topic(t, line_no, offset);
    topics.push_back(std::move(t));
  }
  return topics;
}

void check_unique(const std::vector<Topic>& topics) {
  std::unordered_set<std::string> seen;
  for (const auto& t : topics) {
    if (!seen.insert(t.id).second) {
      throw ParseError("duplicate topic id '" + t.id + "'", 0, 0);
    }
  }
}

}  // namespace

TopicFormat parse_topic_format(std::string_view name) {
  if (name == "trec" || name == "sgml" || name == "trec-sgml") {
    return TopicFormat::kTrecSgml;
  }
  if (name == "jsonl") return TopicFormat::kJsonl;
  throw PreconditionError("unknown topic format '" + std::string(name) + "'");
}

std::vector<Topic> parse_topics(std::string_view input, TopicFormat format) {
  auto topics = format == TopicFormat::kTrecSgml ? parse_sgml(input)
                                                 : parse_jsonl(input);
  check_unique(topics);
  return topics;
}

std::vector<Topic> parse_topics(std::istream& input, TopicFormat format) {
  const std::string text(std::istreambuf_iterator<char>(input), {});
  return parse_topics(text, format);
}

std::vector<Topic> load_topics(const std::string& path, TopicFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open topic file '" + path + "'");
  return parse_topics(in, format);
}

std::string serialize_topics(const std::vector<Topic>& topics,
                             TopicFormat format) {
  std::string out;
  for (const auto& t : topics) {
    if (format == TopicFormat::kJsonl) {
      json j = json::object();
      j["id"] = t.id;
      if (!t.title.empty()) j["title"] = t.title;
      j["description"] = t.description;
      if (t.narrative) j["narrative"] = *t.narrative;
      out += j.dump();
      out += '\n';
    } else {
      out += "<top>\n<num> Number: " + t.id + "\n<title> " + t.title +
             "\n\n<desc> Description:\n" + t.description + "\n";
      if (t.narrative) out += "\n<narr> Narrative:\n" + *t.narrative + "\n";
      out += "</top>\n\n";
    }
  }
  return out;
}

MaskedTopic mask_description(const Topic& topic, const KeywordRule& rule) {
  if (trim(topic.description).empty()) {
    throw PreconditionError("unmaskable description");
  }
  struct Candidate {
    std::size_t index;  // into spans
    bool proper;
    double frequency;
  };
  const auto spans = text::tokenize_spans(topic.description);
  const auto& function_words = text::function_words();
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto surface = spans[i].text;
    std::size_t p = 0;
    bool has_letter = false;
    bool capitalised = false;
    for (std::size_t q = 0; q < surface.size();) {
      const char32_t cp = text::decode_utf8(surface, q);
      if (text::is_letter(cp)) {
        if (!has_letter) capitalised = text::is_upper(cp) && p == 0;
        has_letter = true;
      }
      ++p;
    }
    const std::string lower = text::to_lower(surface);
    if (!has_letter || text::utf8_length(lower) < 2 ||
        function_words.contains(lower)) {
      continue;
    }
    const double freq = text::word_family_frequency(text::porter_stem(lower));
    candidates.push_back({i, capitalised && i > 0, freq});
  }
  if (candidates.empty()) throw PreconditionError("unmaskable description");

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.proper != b.proper) return a.proper;
                     if (a.frequency != b.frequency) {
                       return a.frequency < b.frequency;
                     }
                     return a.index < b.index;
                   });
  const std::size_t k = std::clamp<std::size_t>(rule.max_terms, 1,
                                                candidates.size());
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < k; ++i) chosen.push_back(candidates[i].index);
  std::sort(chosen.begin(), chosen.end());

  MaskedTopic out;
  out.source_topic_id = topic.id;
  std::size_t copied = 0;
  for (const std::size_t idx : chosen) {
    const auto& span = spans[idx];
    out.masked_text.append(topic.description, copied, span.offset - copied);
    out.masked_text.append(kMaskToken);
    out.masked_terms.emplace_back(span.text);
    copied = span.offset + span.text.size();
  }
  out.masked_text.append(topic.description, copied);
  return out;
}

std::string unmask(const MaskedTopic& masked) {
  std::string out;
  std::size_t pos = 0;
  for (const auto& term : masked.masked_terms) {
    const std::size_t hit = masked.masked_text.find(kMaskToken, pos);
    if (hit == std::string::npos) {
      throw InvariantError("fewer [MASK] markers than masked terms");
    }
    out.append(masked.masked_text, pos, hit - pos);
    out += term;
    pos = hit + kMaskToken.size();
  }
  out.append(masked.masked_text, pos);
  return out;
}

}  // namespace synthcoll
