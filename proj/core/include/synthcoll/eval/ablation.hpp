#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "synthcoll/forge/document.hpp"
#include "synthcoll/forge/qrels.hpp"
#include "synthcoll/retrieval/run.hpp"

namespace synthcoll::eval {

struct Downsample {
  std::size_t n = 0;
  std::size_t repeats = 1;
  std::uint64_t seed = 0;
};

struct AblationSpec {
  std::set<forge::Category> exclude;  // TRICKY_NONREL and/or RANDOM
  std::optional<std::size_t> cap_relevant;
  std::optional<Downsample> downsample;
};

struct Collection {
  forge::Corpus corpus;
  Qrels qrels;
};

/// Throws PreconditionError on an exclusion outside {TRICKY_NONREL, RANDOM},
/// cap 0 or zero repeats.
void validate(const AblationSpec& spec);

/// Applies exclusion, then the N_R cap (generation order: INIT first, then
/// SUBTOPIC docs by ordinal), then downsampling. Returns one collection, or
/// `repeats` collections when downsampling; repeat i draws with seed + i.
/// Qrels rows survive only for surviving docs. Throws PreconditionError
/// when n exceeds the corpus size.
std::vector<Collection> apply_ablation(const forge::Corpus& corpus, const Qrels& qrels,
                                       const AblationSpec& spec);

/// n of `size` indices, uniformly without replacement, returned ascending.
std::vector<std::size_t> sample_indices(std::size_t size, std::size_t n, std::uint64_t seed);

/// Drops docs that no run retrieved and that carry no positive judgment.
Collection remove_unretrieved(const forge::Corpus& corpus, const Qrels& qrels,
                              const std::vector<const Run*>& runs);

}  // namespace synthcoll::eval
