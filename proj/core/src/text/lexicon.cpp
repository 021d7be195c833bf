#include "synthcoll/text/lexicon.hpp"

#include <algorithm>
#include <array>

namespace synthcoll::text {

namespace {

struct FamilyEntry {
  std::string_view stem;
  double per_million;
};

constexpr FamilyEntry kFamilies[] = {
#include "generated/word_families.inc"
};

constexpr std::string_view kVocabulary[] = {
#include "generated/mock_vocabulary.inc"
};

static_assert(std::size(kVocabulary) == 5000);

}  // namespace

double word_family_frequency(std::string_view stem) noexcept {
  const auto* it = std::lower_bound(
      std::begin(kFamilies), std::end(kFamilies), stem,
      [](const FamilyEntry& e, std::string_view s) { return e.stem < s; });
  if (it == std::end(kFamilies) || it->stem != stem) return 0.0;
  return it->per_million;
}

std::span<const std::string_view> mock_vocabulary() noexcept {
  return kVocabulary;
}

}  // namespace synthcoll::text
