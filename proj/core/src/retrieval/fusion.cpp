#include "synthcoll/retrieval/fusion.hpp"

#include <algorithm>
#include <map>

#include "synthcoll/error.hpp"

namespace synthcoll::retrieval {

namespace {

std::map<std::string, double, std::less<>> normalised(const std::vector<RunEntry>& slice) {
  std::map<std::string, double, std::less<>> out;
  if (slice.empty()) return out;
  const auto [lo, hi] = std::minmax_element(
      slice.begin(), slice.end(),
      [](const RunEntry& a, const RunEntry& b) { return a.score < b.score; });
  const double min = lo->score;
  const double range = hi->score - min;
  for (const auto& e : slice) {
    out[e.doc_id] = range > 0 ? (e.score - min) / range : 0.5;
  }
  return out;
}

}  // namespace

Run fuse(const Run& run_a, const Run& run_b, double alpha, std::size_t k,
         const std::string& tag) {
  if (!(alpha >= 0 && alpha <= 1)) throw PreconditionError("alpha must lie in [0, 1]");
  const auto a = group_by_topic(run_a);
  const auto b = group_by_topic(run_b);
  for (const auto& [t, s] : a) {
    if (!b.count(t)) throw PreconditionError("topic " + t + " is missing from the second run");
  }
  for (const auto& [t, s] : b) {
    if (!a.count(t)) throw PreconditionError("topic " + t + " is missing from the first run");
  }
  Run out;
  for (const auto& [topic, slice_a] : a) {
    const auto na = normalised(slice_a);
    const auto nb = normalised(b.at(topic));
    std::map<std::string, double, std::less<>> fused;
    for (const auto& [doc, s] : na) fused[doc] += alpha * s;
    for (const auto& [doc, s] : nb) fused[doc] += (1 - alpha) * s;
    std::vector<RunEntry> entries;
    entries.reserve(fused.size());
    for (const auto& [doc, s] : fused) entries.push_back({topic, doc, 0, s, tag});
    rank_entries(entries);
    if (entries.size() > k) entries.resize(k);
    out.insert(out.end(), entries.begin(), entries.end());
  }
  return out;
}

}  // namespace synthcoll::retrieval
