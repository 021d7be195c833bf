#include "synthcoll/genclient/list_parser.hpp"

#include <cctype>
#include <optional>

#include "synthcoll/error.hpp"

namespace synthcoll::genclient {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (is_blank(s.front()) || s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (is_blank(s.back()) || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<std::string_view> strip_prefix(std::string_view line) {
  if (line.size() >= 2 && line[0] == '-' && is_blank(line[1])) {
    return trim(line.substr(2));
  }
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
    ++i;
  }
  if (i == 0 || i == line.size()) return std::nullopt;
  if (line[i] == '.' || line[i] == ')') return trim(line.substr(i + 1));
  std::size_t j = i;
  while (j < line.size() && is_blank(line[j])) ++j;
  if (j > i && j < line.size() && line[j] == '-') {
    return trim(line.substr(j + 1));
  }
  return std::nullopt;
}

}  // namespace

NumberedList parse_numbered_list(std::string_view text, std::size_t expected) {
  NumberedList out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty()) continue;
    if (auto item = strip_prefix(line); item && !item->empty()) {
      out.items.emplace_back(*item);
    }
  }
  if (out.items.empty() && !trim(text).empty()) {
    throw Error("no list items found");
  }
  out.shortfall = out.items.size() < expected ? expected - out.items.size() : 0;
  return out;
}

}  // namespace synthcoll::genclient
