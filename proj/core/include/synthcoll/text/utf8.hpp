#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace synthcoll::text {

/// Decodes the code point starting at `pos`. Invalid or truncated sequences
/// decode to U+FFFD and advance by one byte. `pos` is advanced past the
/// sequence.
char32_t decode_utf8(std::string_view s, std::size_t& pos) noexcept;

void append_utf8(std::string& out, char32_t cp);

/// Letter classification over the scripts that appear in practice in English
/// and European text plus the major CJK and Hangul blocks.
bool is_letter(char32_t cp) noexcept;
bool is_digit(char32_t cp) noexcept;
inline bool is_word_char(char32_t cp) noexcept {
  return is_letter(cp) || is_digit(cp);
}
bool is_upper(char32_t cp) noexcept;
char32_t to_lower(char32_t cp) noexcept;

std::string to_lower(std::string_view s);

/// Number of code points.
std::size_t utf8_length(std::string_view s) noexcept;

}  // namespace synthcoll::text
