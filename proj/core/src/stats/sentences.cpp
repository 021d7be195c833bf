#include "synthcoll/stats/sentences.hpp"

#include <algorithm>

#include "synthcoll/text/utf8.hpp"

namespace synthcoll::stats {

const std::vector<std::string>& sentence_abbreviations() {
  static const std::vector<std::string> kList = [] {
    std::vector<std::string> v = {
        "dr.",   "mr.",   "mrs.",  "ms.",   "prof.", "sr.",   "jr.",   "st.",   "mt.",
        "gen.",  "col.",  "lt.",   "sgt.",  "capt.", "gov.",  "sen.",  "rep.",  "rev.",
        "vs.",   "etc.",  "e.g.",  "i.e.",  "cf.",   "al.",   "approx.", "ca.",
        "u.s.",  "u.k.",  "u.n.",  "e.u.",  "u.s.a.", "d.c.", "a.m.",  "p.m.",
        "inc.",  "ltd.",  "co.",   "corp.", "dept.", "univ.", "assn.", "bros.",
        "no.",   "nos.",  "vol.",  "fig.",  "figs.", "eq.",   "pp.",   "p.",    "ch.",
        "jan.",  "feb.",  "mar.",  "apr.",  "jun.",  "jul.",  "aug.",  "sep.",  "sept.",
        "oct.",  "nov.",  "dec.",  "mon.",  "tue.",  "wed.",  "thu.",  "fri.",  "sat.", "sun.",
        "ph.d.", "m.d.",  "b.a.",  "m.a.",  "b.sc.", "m.sc.", "ave.",  "blvd.", "rd.",
    };
    std::sort(v.begin(), v.end());
    return v;
  }();
  return kList;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

bool is_opener(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Word ending at `dot` (inclusive), lower-cased, e.g. "dr." or "u.s.".
bool is_abbreviation(std::string_view text, std::size_t dot) {
  std::size_t start = dot;
  while (start > 0 && !is_space(text[start - 1]) && !is_opener(text[start - 1])) --start;
  std::string word;
  for (std::size_t i = start; i <= dot; ++i) {
    const char c = text[i];
    word += (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c;
  }
  const auto& list = sentence_abbreviations();
  return std::binary_search(list.begin(), list.end(), word);
}

// Code point starting at pos is an uppercase letter or a digit.
bool starts_sentence(std::string_view text, std::size_t pos) {
  std::size_t p = pos;
  const char32_t cp = text::decode_utf8(text, p);
  return text::is_digit(cp) || text::is_upper(cp);
}

}  // namespace

std::vector<std::string_view> split_sentences(std::string_view text) {
  std::vector<std::string_view> out;
  const auto emit = [&](std::size_t from, std::size_t to) {
    if (to <= from) return;  // a terminator already closed this sentence
    const auto s = trim(text.substr(from, to - from));
    if (!s.empty()) out.push_back(s);
  };
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      std::size_t j = i + 1;
      while (j < text.size() && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r')) ++j;
      if (j < text.size() && text[j] == '\n') {
        emit(start, i);
        while (j < text.size() && is_space(text[j])) ++j;
        start = i = j;
        continue;
      }
      ++i;
      continue;
    }
    if (!is_terminator(c)) {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    while (end < text.size() && is_terminator(text[end])) ++end;
    while (end < text.size() && is_closer(text[end])) ++end;
    std::size_t next = end;
    while (next < text.size() && is_space(text[next]) && text[next] != '\n') ++next;
    const bool spaced = next > end || (next < text.size() && text[next] == '\n');
    if (!spaced) {
      i = end;
      continue;
    }
    while (next < text.size() && is_space(text[next])) ++next;
    std::size_t first = next;
    while (first < text.size() && is_opener(text[first])) ++first;
    const bool boundary = first < text.size() && starts_sentence(text, first) &&
                          !(c == '.' && end == i + 1 && is_abbreviation(text, i));
    if (boundary) {
      emit(start, end);
      start = next;
    }
    i = end;
  }
  emit(start, text.size());
  return out;
}

}  // namespace synthcoll::stats
