#pragma once

#include <string>
#include <string_view>

namespace synthcoll::text {

/// Porter (1980) suffix stripper, following the published reference C
/// implementation including its two documented departures (abli->able
/// becomes bli->ble, and the extra logi->log rule).
///
/// Expects a lowercase word. Words of two or fewer characters and words that
/// contain anything other than ASCII a-z are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace synthcoll::text
