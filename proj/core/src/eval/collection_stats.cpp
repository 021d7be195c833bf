#include "synthcoll/eval/collection_stats.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>
#include <optional>
#include <unordered_set>

#include <fmt/format.h>

#include "synthcoll/error.hpp"

namespace synthcoll::eval {

namespace {

void fill_spread(CollectionStats& s, const std::vector<std::size_t>& per_topic) {
  if (per_topic.empty()) return;
  const double mean = s.mean_relevant_per_topic;
  double ss = 0;
  for (const auto n : per_topic) ss += (static_cast<double>(n) - mean) * (static_cast<double>(n) - mean);
  s.std_relevant_per_topic = std::sqrt(ss / static_cast<double>(per_topic.size()));
  s.min_relevant_per_topic = *std::min_element(per_topic.begin(), per_topic.end());
  s.max_relevant_per_topic = *std::max_element(per_topic.begin(), per_topic.end());
}

}  // namespace

CollectionStats collection_stats_from_counts(std::size_t documents, std::size_t topics,
                                             std::size_t relevant,
                                             const std::vector<std::size_t>& relevant_per_topic) {
  if (!relevant_per_topic.empty()) {
    if (relevant_per_topic.size() != topics) {
      throw PreconditionError(fmt::format("{} per-topic counts for {} topics",
                                          relevant_per_topic.size(), topics));
    }
    const auto sum = std::accumulate(relevant_per_topic.begin(), relevant_per_topic.end(), std::size_t{0});
    if (sum != relevant) {
      throw PreconditionError(fmt::format("per-topic counts sum to {}, not {}", sum, relevant));
    }
  }
  if (documents == 0) throw PreconditionError("collection has no documents");
  if (topics == 0) throw PreconditionError("collection has no topics");
  CollectionStats s;
  s.documents = documents;
  s.topics = topics;
  s.relevant = relevant;
  s.unique_relevant = relevant;
  s.relevant_ratio = static_cast<double>(relevant) / static_cast<double>(documents);
  s.mean_relevant_per_topic = static_cast<double>(relevant) / static_cast<double>(topics);
  fill_spread(s, relevant_per_topic);
  return s;
}

CollectionStats collection_stats(const forge::Corpus& corpus, const Qrels& qrels) {
  std::vector<std::size_t> per_topic;
  std::size_t relevant = 0;
  for (const auto& t : qrels.topics()) {
    const auto n = qrels.relevant_count(t);
    if (n == 0) continue;
    per_topic.push_back(n);
    relevant += n;
  }
  auto s = collection_stats_from_counts(corpus.size(), per_topic.size(), relevant, per_topic);
  std::unordered_set<std::string_view> unique;
  for (const auto& e : qrels.entries()) {
    if (e.relevance > 0) unique.insert(e.doc_id);
  }
  s.unique_relevant = unique.size();
  for (const auto& d : corpus) ++s.documents_by_category[std::string(forge::category_name(d.category))];
  return s;
}

CollectionStats collection_stats_from_manifest(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("collection manifest: ") + e.what(), 0);
  }
  std::size_t documents = 0, topics = 0, relevant = 0;
  std::vector<std::size_t> per_topic;
  std::optional<std::size_t> unique;
  try {
    documents = j.at("documents").get<std::size_t>();
    if (j.contains("relevant_per_topic")) per_topic = j.at("relevant_per_topic").get<std::vector<std::size_t>>();
    topics = j.contains("topics") ? j.at("topics").get<std::size_t>() : per_topic.size();
    relevant = j.contains("relevant") ? j.at("relevant").get<std::size_t>()
                                      : std::accumulate(per_topic.begin(), per_topic.end(), std::size_t{0});
    if (j.contains("unique_relevant")) unique = j.at("unique_relevant").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("collection manifest: ") + e.what(), 0);
  }
  auto s = collection_stats_from_counts(documents, topics, relevant, per_topic);
  if (unique) s.unique_relevant = *unique;
  return s;
}

std::string CollectionStats::to_tsv(int decimals) const {
  std::string out;
  out += fmt::format("documents\t{}\n", documents);
  out += fmt::format("topics\t{}\n", topics);
  out += fmt::format("relevant\t{}\n", relevant);
  out += fmt::format("unique_relevant\t{}\n", unique_relevant);
  out += fmt::format("relevant_ratio\t{:.{}f}\n", relevant_ratio, decimals);
  out += fmt::format("mean_relevant_per_topic\t{:.{}f}\n", mean_relevant_per_topic, decimals);
  if (std_relevant_per_topic) {
    out += fmt::format("std_relevant_per_topic\t{:.{}f}\n", *std_relevant_per_topic, decimals);
    out += fmt::format("min_relevant_per_topic\t{}\n", *min_relevant_per_topic);
    out += fmt::format("max_relevant_per_topic\t{}\n", *max_relevant_per_topic);
  }
  for (const auto& [c, n] : documents_by_category) out += fmt::format("documents.{}\t{}\n", c, n);
  return out;
}

std::string CollectionStats::to_json() const {
  nlohmann::ordered_json j;
  j["documents"] = documents;
  j["topics"] = topics;
  j["relevant"] = relevant;
  j["unique_relevant"] = unique_relevant;
  j["relevant_ratio"] = relevant_ratio;
  j["mean_relevant_per_topic"] = mean_relevant_per_topic;
  if (std_relevant_per_topic) {
    j["std_relevant_per_topic"] = *std_relevant_per_topic;
    j["min_relevant_per_topic"] = *min_relevant_per_topic;
    j["max_relevant_per_topic"] = *max_relevant_per_topic;
  }
  if (!documents_by_category.empty()) j["documents_by_category"] = documents_by_category;
  return j.dump(2);
}

}  // namespace synthcoll::eval
