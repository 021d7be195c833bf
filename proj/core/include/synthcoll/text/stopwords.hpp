#pragma once

#include <string>
#include <string_view>
#include <unordered_set>

namespace synthcoll::text {

using WordSet = std::unordered_set<std::string, std::hash<std::string>,
                                   std::equal_to<>>;

/// The 33-word English stop set used by Lucene's EnglishAnalyzer.
const WordSet& retrieval_stopwords();

/// A broader English function-word list (pronouns, auxiliaries, contractions)
/// used when picking keywords to mask.
const WordSet& function_words();

}  // namespace synthcoll::text
