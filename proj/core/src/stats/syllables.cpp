#include "synthcoll/stats/syllables.hpp"

namespace synthcoll::stats {

namespace {

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

bool is_vowel(char c) {
  c = lower(c);
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

}  // namespace

std::uint32_t count_syllables(std::string_view word) noexcept {
  std::uint32_t groups = 0;
  bool in_group = false;
  bool any_letter = false;
  for (const char c : word) {
    any_letter = any_letter || is_ascii_letter(c) || (static_cast<unsigned char>(c) >= 0x80);
    const bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  if (!any_letter) return 1;
  const std::size_t n = word.size();
  if (n >= 2 && lower(word[n - 1]) == 'e' && !is_vowel(word[n - 2])) {
    const bool le_after_consonant =
        lower(word[n - 2]) == 'l' && n >= 3 && !is_vowel(word[n - 3]) && is_ascii_letter(word[n - 3]);
    if (!le_after_consonant && groups > 0) --groups;
  }
  return groups == 0 ? 1 : groups;
}

}  // namespace synthcoll::stats
