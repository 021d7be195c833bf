#include "synthcoll/retrieval/rerank.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

#include "net/http_json.hpp"
#include "synthcoll/error.hpp"
#include "synthcoll/text/analyzer.hpp"

namespace synthcoll::retrieval {

std::vector<double> MockReranker::score(const std::string& query,
                                        const std::vector<std::string>& passages) const {
  static const text::Analyzer analyzer = text::Analyzer::english();
  const auto q = analyzer.analyze(query);
  std::vector<double> out;
  out.reserve(passages.size());
  for (const auto& p : passages) {
    const auto terms = analyzer.analyze(p);
    std::unordered_map<std::string_view, std::uint32_t> tf;
    for (const auto& t : terms) ++tf[t];
    double s = 0;
    for (const auto& t : q) {
      const auto it = tf.find(t);
      if (it != tf.end()) s += std::log1p(it->second);
    }
    out.push_back(s / std::sqrt(1.0 + static_cast<double>(terms.size())));
  }
  return out;
}

HttpReranker::HttpReranker(HttpRerankerOptions options) : options_(std::move(options)) {
  if (options_.url.empty()) throw PreconditionError("rerank endpoint URL is empty");
}

std::vector<double> HttpReranker::score(const std::string& query,
                                        const std::vector<std::string>& passages) const {
  if (passages.empty()) return {};
  const net::HttpJsonClient client(options_.url, options_.api_key, options_.timeout,
                                   options_.retry);
  const auto reply = client.post({{"query", query}, {"passages", passages}});
  if (!reply.contains("scores") || !reply.at("scores").is_array()) {
    throw ProviderError(200, "rerank reply without a 'scores' array");
  }
  return reply.at("scores").get<std::vector<double>>();
}

Run rerank(const Run& run, const std::map<std::string, std::string, std::less<>>& queries,
           const TextLookup& doc_text, const RerankClient& client, std::size_t depth,
           const std::string& tag) {
  Run out;
  for (auto& [topic, slice] : group_by_topic(run)) {
    const auto q = queries.find(topic);
    if (q == queries.end()) throw Error("no query for topic " + topic);
    const std::size_t head = std::min(depth, slice.size());
    std::vector<std::string> passages;
    passages.reserve(head);
    for (std::size_t i = 0; i < head; ++i) {
      const auto* text = doc_text(slice[i].doc_id);
      if (!text) throw Error("no text for document " + slice[i].doc_id);
      passages.push_back(*text);
    }
    const auto scores = client.score(q->second, passages);
    if (scores.size() != head) {
      throw Error(fmt::format("reranker returned {} scores for {} passages (topic {})",
                              scores.size(), head, topic));
    }
    std::vector<RunEntry> top(slice.begin(), slice.begin() + static_cast<std::ptrdiff_t>(head));
    for (std::size_t i = 0; i < head; ++i) {
      top[i].score = scores[i];
      top[i].tag = tag;
    }
    rank_entries(top);
    const double floor = top.empty() ? 0.0 : top.back().score;
    if (head < slice.size()) {
      const double shift = floor - 1.0 - slice[head].score;
      for (std::size_t i = head; i < slice.size(); ++i) {
        RunEntry e = slice[i];
        e.score += shift;
        e.rank = static_cast<std::uint32_t>(i + 1);
        e.tag = tag;
        top.push_back(std::move(e));
      }
    }
    out.insert(out.end(), top.begin(), top.end());
  }
  return out;
}

}  // namespace synthcoll::retrieval
