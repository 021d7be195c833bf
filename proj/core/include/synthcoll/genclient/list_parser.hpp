#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace synthcoll::genclient {

struct NumberedList {
  std::vector<std::string> items;
  std::size_t shortfall = 0;  // expected - items.size(), floored at 0
};

/// Extracts list items from generator output. Recognised line prefixes are
/// "N.", "N)", "N -" and "- "; other lines (preambles, blank lines) are
/// skipped. Returning fewer than `expected` items is not an error.
///
/// Throws Error("no list items found") when `text` is non-blank and yields
/// nothing.
NumberedList parse_numbered_list(std::string_view text, std::size_t expected);

}  // namespace synthcoll::genclient
