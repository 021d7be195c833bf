#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace synthcoll::stats {

/// Splits at '.', '!' or '?' followed by whitespace and then an uppercase
/// letter or digit (closing quotes/brackets may sit between). Known
/// abbreviations ("Dr.", "U.S.", "e.g.", ...) do not end a sentence. A
/// blank line always ends one, so headings stand alone. Returned sentences
/// are trimmed; a trailing unterminated fragment is one sentence.
std::vector<std::string_view> split_sentences(std::string_view text);

/// The abbreviation list, lower-case with the final period.
const std::vector<std::string>& sentence_abbreviations();

}  // namespace synthcoll::stats
