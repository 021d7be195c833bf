#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

namespace synthcoll::stats {

/// Maximal groups of a, e, i, o, u, y (case-insensitive), minus one for a
/// terminal silent "e" that forms its own group (but not "le" after a
/// consonant), at least 1. Tokens without letters count 1.
std::uint32_t count_syllables(std::string_view word) noexcept;

/// Replaceable syllable counter, e.g. for a pronunciation dictionary.
using SyllableCounter = std::function<std::uint32_t(std::string_view)>;

}  // namespace synthcoll::stats
