#include "synthcoll/eval/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <nlohmann/json.hpp>

#include <fmt/format.h>

#include "synthcoll/error.hpp"

namespace synthcoll::eval {

double precision_at_k(const std::vector<RunEntry>& slice, const Qrels& qrels,
                      std::string_view topic_id, std::size_t k) {
  if (k == 0) throw PreconditionError("precision depth k must be >= 1");
  const std::size_t depth = std::min(k, slice.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i) hits += qrels.is_relevant(topic_id, slice[i].doc_id);
  return static_cast<double>(hits) / static_cast<double>(k);
}

double average_precision(const std::vector<RunEntry>& slice, const Qrels& qrels,
                         std::string_view topic_id, std::size_t cutoff) {
  const std::size_t r = qrels.relevant_count(topic_id);
  if (r == 0) return 0;
  const std::size_t depth = std::min(cutoff, slice.size());
  std::size_t hits = 0;
  double sum = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (qrels.is_relevant(topic_id, slice[i].doc_id)) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(r);
}

double r_precision(const std::vector<RunEntry>& slice, const Qrels& qrels,
                   std::string_view topic_id) {
  const std::size_t r = qrels.relevant_count(topic_id);
  if (r == 0) return 0;
  const std::size_t depth = std::min(r, slice.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i) hits += qrels.is_relevant(topic_id, slice[i].doc_id);
  return static_cast<double>(hits) / static_cast<double>(r);
}

std::string MetricId::name() const {
  switch (kind) {
    case Kind::kMap:
      return "map";
    case Kind::kRPrec:
      return "rprec";
    case Kind::kPrecision:
      return "P." + std::to_string(k);
  }
  return "map";
}

MetricId parse_metric(std::string_view name) {
  if (name == "map" || name == "MAP") return {MetricId::Kind::kMap, 0};
  if (name == "rprec" || name == "Rprec" || name == "RPrec" || name == "R-prec") {
    return {MetricId::Kind::kRPrec, 0};
  }
  if (name.size() > 2 && (name[0] == 'P' || name[0] == 'p') &&
      (name[1] == '.' || name[1] == '_' || name[1] == '@')) {
    std::size_t k = 0;
    const auto digits = name.substr(2);
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc{} && p == digits.data() + digits.size() && k > 0) {
      return {MetricId::Kind::kPrecision, k};
    }
  }
  throw PreconditionError("unknown metric '" + std::string(name) +
                          "' (expected map, rprec or P.<k>)");
}

std::vector<MetricId> parse_metric_list(std::string_view list) {
  std::vector<MetricId> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    auto comma = list.find(',', pos);
    if (comma == std::string_view::npos) comma = list.size();
    auto item = list.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.push_back(parse_metric(item));
    pos = comma + 1;
  }
  if (out.empty()) throw PreconditionError("empty metric list");
  return out;
}

double TopicMetrics::value(const MetricId& m) const {
  switch (m.kind) {
    case MetricId::Kind::kMap:
      return ap;
    case MetricId::Kind::kRPrec:
      return rprec;
    case MetricId::Kind::kPrecision: {
      const auto it = p_at.find(m.k);
      if (it == p_at.end()) throw PreconditionError("P." + std::to_string(m.k) + " was not computed");
      return it->second;
    }
  }
  return 0;
}

MetricReport evaluate_run(const Run& run, const Qrels& qrels,
                          const std::vector<std::size_t>& ks, std::size_t cutoff) {
  MetricReport report;
  report.ks = ks;
  std::sort(report.ks.begin(), report.ks.end());
  report.ks.erase(std::unique(report.ks.begin(), report.ks.end()), report.ks.end());
  report.cutoff = cutoff;
  if (!run.empty()) report.run_tag = run.front().tag;
  for (const auto& [topic, slice] : group_by_topic(run)) {
    const std::size_t r = qrels.relevant_count(topic);
    if (r == 0) {
      report.flagged.push_back(topic);
      continue;
    }
    TopicMetrics m;
    m.num_rel = r;
    m.num_ret = slice.size();
    for (const auto& e : slice) m.num_rel_ret += qrels.is_relevant(topic, e.doc_id);
    for (const auto k : report.ks) m.p_at[k] = precision_at_k(slice, qrels, topic, k);
    m.ap = average_precision(slice, qrels, topic, cutoff);
    m.rprec = r_precision(slice, qrels, topic);
    report.per_topic.emplace(topic, std::move(m));
  }
  const double n = static_cast<double>(report.per_topic.size());
  if (n > 0) {
    for (const auto k : report.ks) report.mean.p_at[k] = 0;
    for (const auto& [t, m] : report.per_topic) {
      report.mean.ap += m.ap;
      report.mean.rprec += m.rprec;
      for (const auto& [k, v] : m.p_at) report.mean.p_at[k] += v;
      report.mean.num_rel += m.num_rel;
      report.mean.num_ret += m.num_ret;
      report.mean.num_rel_ret += m.num_rel_ret;
    }
    report.mean.ap /= n;
    report.mean.rprec /= n;
    for (auto& [k, v] : report.mean.p_at) v /= n;
  }
  return report;
}

std::string MetricReport::to_tsv(const std::vector<MetricId>& metrics, int decimals) const {
  std::string out;
  const auto row = [&](const std::string& topic, const TopicMetrics& m) {
    for (const auto& id : metrics) {
      out += fmt::format("{}\t{}\t{:.{}f}\n", topic, id.name(), m.value(id), decimals);
    }
  };
  for (const auto& [t, m] : per_topic) row(t, m);
  row("all", mean);
  return out;
}

namespace {

nlohmann::ordered_json metrics_json(const TopicMetrics& m) {
  nlohmann::ordered_json j;
  j["num_rel"] = m.num_rel;
  j["num_ret"] = m.num_ret;
  j["num_rel_ret"] = m.num_rel_ret;
  j["map"] = m.ap;
  j["rprec"] = m.rprec;
  for (const auto& [k, v] : m.p_at) j["P." + std::to_string(k)] = v;
  return j;
}

}  // namespace

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["run_tag"] = run_tag;
  j["cutoff"] = cutoff;
  j["evaluated_topics"] = per_topic.size();
  j["flagged_topics"] = flagged;
  j["mean"] = metrics_json(mean);
  auto& pt = j["per_topic"];
  pt = nlohmann::ordered_json::object();
  for (const auto& [t, m] : per_topic) pt[t] = metrics_json(m);
  return j.dump(2);
}

}  // namespace synthcoll::eval
