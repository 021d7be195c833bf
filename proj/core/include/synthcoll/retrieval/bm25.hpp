#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "synthcoll/retrieval/index.hpp"
#include "synthcoll/retrieval/run.hpp"

namespace synthcoll::retrieval {

struct Bm25Params {
  double k1 = 0.9;
  double b = 0.4;
};

/// Throws PreconditionError when k1 < 0 or b is outside [0, 1].
void validate(const Bm25Params& params);

/// ln(1 + (N - df + 0.5) / (df + 0.5)).
double bm25_idf(std::uint32_t doc_count, std::uint32_t df) noexcept;

/// Top-k by BM25 over the query's analyzed terms (repeats count). Docs
/// scoring 0 are omitted; ties go to the smaller doc_id.
std::vector<RunEntry> bm25_search(const Index& index, std::string_view query,
                                  const Bm25Params& params, std::size_t k,
                                  const std::string& topic_id = {},
                                  const std::string& tag = "bm25");

}  // namespace synthcoll::retrieval
