#pragma once

#include <cstddef>
#include <string>

#include "synthcoll/retrieval/run.hpp"

namespace synthcoll::retrieval {

/// Per-topic min-max normalisation of each run (a constant-score topic maps
/// to 0.5), then alpha * a + (1 - alpha) * b; a doc missing from one run
/// gets 0 from it. Throws PreconditionError when alpha is outside [0, 1] or
/// the runs cover different topics.
Run fuse(const Run& run_a, const Run& run_b, double alpha, std::size_t k,
         const std::string& tag = "hybrid");

}  // namespace synthcoll::retrieval
