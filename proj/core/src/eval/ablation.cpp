#include "synthcoll/eval/ablation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_set>

#include <fmt/format.h>

#include "synthcoll/error.hpp"
#include "synthcoll/random.hpp"

namespace synthcoll::eval {

using forge::Category;
using forge::Corpus;

void validate(const AblationSpec& spec) {
  for (const auto c : spec.exclude) {
    if (c != Category::kTrickyNonrel && c != Category::kRandom) {
      throw PreconditionError("only TRICKY_NONREL and RANDOM documents can be excluded, not " +
                              std::string(forge::category_name(c)));
    }
  }
  if (spec.cap_relevant && *spec.cap_relevant == 0) {
    throw PreconditionError("cap on relevant documents must be >= 1");
  }
  if (spec.downsample && spec.downsample->repeats == 0) {
    throw PreconditionError("downsample repeats must be >= 1");
  }
}

namespace {

Qrels restrict_qrels(const Qrels& qrels, const Corpus& corpus) {
  std::unordered_set<std::string_view> ids;
  ids.reserve(corpus.size());
  for (const auto& d : corpus) ids.insert(d.doc_id);
  return qrels.filtered([&](const QrelsEntry& e) { return ids.count(e.doc_id) > 0; });
}

// Position of a relevant doc in generation order within its topic.
std::pair<int, std::uint32_t> generation_key(const forge::GeneratedDoc& d) {
  const auto parsed = forge::parse_doc_id(d.doc_id);
  const int phase = d.category == Category::kInitRelevant ? 0 : 1;
  return {phase, parsed ? parsed->ordinal : 0};
}

}  // namespace

std::vector<std::size_t> sample_indices(std::size_t size, std::size_t n, std::uint64_t seed) {
  if (n > size) {
    throw PreconditionError(fmt::format("cannot sample {} documents from {}", n, size));
  }
  std::vector<std::size_t> pool(size);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(size - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<Collection> apply_ablation(const Corpus& corpus, const Qrels& qrels,
                                       const AblationSpec& spec) {
  validate(spec);
  Corpus kept;
  for (const auto& d : corpus) {
    if (!spec.exclude.count(d.category)) kept.push_back(d);
  }
  if (spec.cap_relevant) {
    // Relevant docs per topic with their corpus index, in generation order.
    std::map<std::string, std::vector<std::size_t>> by_topic;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      const auto& d = kept[i];
      if (d.topic_id && forge::is_relevant_category(d.category)) by_topic[*d.topic_id].push_back(i);
    }
    std::vector<bool> drop(kept.size(), false);
    for (auto& [topic, idx] : by_topic) {
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return generation_key(kept[a]) < generation_key(kept[b]);
      });
      for (std::size_t i = *spec.cap_relevant; i < idx.size(); ++i) drop[idx[i]] = true;
    }
    Corpus capped;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (!drop[i]) capped.push_back(std::move(kept[i]));
    }
    kept = std::move(capped);
  }
  std::vector<Collection> out;
  if (!spec.downsample) {
    Qrels q = restrict_qrels(qrels, kept);
    out.push_back({std::move(kept), std::move(q)});
    return out;
  }
  const auto& ds = *spec.downsample;
  if (ds.n > kept.size()) {
    throw PreconditionError(fmt::format("downsample size {} exceeds the corpus size {}", ds.n,
                                        kept.size()));
  }
  for (std::size_t r = 0; r < ds.repeats; ++r) {
    Collection c;
    for (const auto i : sample_indices(kept.size(), ds.n, ds.seed + r)) c.corpus.push_back(kept[i]);
    c.qrels = restrict_qrels(qrels, c.corpus);
    out.push_back(std::move(c));
  }
  return out;
}

Collection remove_unretrieved(const Corpus& corpus, const Qrels& qrels,
                              const std::vector<const Run*>& runs) {
  std::unordered_set<std::string_view> retrieved;
  for (const auto* run : runs) {
    for (const auto& e : *run) retrieved.insert(e.doc_id);
  }
  std::unordered_set<std::string_view> judged_relevant;
  for (const auto& e : qrels.entries()) {
    if (e.relevance > 0) judged_relevant.insert(e.doc_id);
  }
  Collection c;
  for (const auto& d : corpus) {
    if (retrieved.count(d.doc_id) || judged_relevant.count(d.doc_id)) c.corpus.push_back(d);
  }
  c.qrels = restrict_qrels(qrels, c.corpus);
  return c;
}

}  // namespace synthcoll::eval
