#pragma once

#include <span>
#include <string_view>

namespace synthcoll::text {

/// Summed frequency (occurrences per million words of general English) of
/// every surface form sharing the Porter stem `stem`. Returns 0 for stems
/// outside the bundled 30k-word table, i.e. they rank as rarer than any
/// listed family.
double word_family_frequency(std::string_view stem) noexcept;

/// Bundled 5,000-word English content vocabulary that drives the mock text
/// generator. Order is stable across releases.
std::span<const std::string_view> mock_vocabulary() noexcept;

}  // namespace synthcoll::text
