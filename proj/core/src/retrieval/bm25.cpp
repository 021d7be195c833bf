#include "synthcoll/retrieval/bm25.hpp"

#include <algorithm>
#include <cmath>

#include "synthcoll/error.hpp"

namespace synthcoll::retrieval {

void validate(const Bm25Params& params) {
  if (!(params.k1 >= 0)) throw PreconditionError("BM25 k1 must be >= 0");
  if (!(params.b >= 0 && params.b <= 1)) {
    throw PreconditionError("BM25 b must lie in [0, 1]");
  }
}

double bm25_idf(std::uint32_t doc_count, std::uint32_t df) noexcept {
  const double n = doc_count;
  const double d = df;
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

std::vector<RunEntry> bm25_search(const Index& index, std::string_view query,
                                  const Bm25Params& params, std::size_t k,
                                  const std::string& topic_id,
                                  const std::string& tag) {
  validate(params);
  if (index.doc_count() == 0) throw PreconditionError("empty index");
  const auto terms = index.analyzer().analyze(query);
  std::vector<double> scores(index.doc_count(), 0.0);
  const double avgdl = index.avgdl();
  for (const auto& t : terms) {
    const auto& list = index.postings(t);
    if (list.empty()) continue;
    const double idf = bm25_idf(index.doc_count(), static_cast<std::uint32_t>(list.size()));
    for (const auto& p : list) {
      const double tf = p.tf;
      const double norm = params.k1 * (1.0 - params.b + params.b * index.doc_length(p.doc) / avgdl);
      scores[p.doc] += idf * tf * (params.k1 + 1.0) / (tf + norm);
    }
  }
  std::vector<std::uint32_t> hits;
  for (std::uint32_t d = 0; d < scores.size(); ++d) {
    if (scores[d] > 0) hits.push_back(d);
  }
  // Ordinals follow doc_id order, so the ordinal is the tie-break.
  const auto better = [&](std::uint32_t a, std::uint32_t b) {
    return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
  };
  const std::size_t depth = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(depth), hits.end(), better);
  std::vector<RunEntry> out;
  out.reserve(depth);
  for (std::size_t i = 0; i < depth; ++i) {
    out.push_back({topic_id, index.doc_id(hits[i]), static_cast<std::uint32_t>(i + 1),
                   scores[hits[i]], tag});
  }
  return out;
}

}  // namespace synthcoll::retrieval
