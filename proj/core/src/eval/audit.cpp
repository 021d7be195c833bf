#include "synthcoll/eval/audit.hpp"

#include <fstream>
#include <iterator>
#include <map>
#include <nlohmann/json.hpp>
#include <unordered_map>

#include <fmt/format.h>

#include "synthcoll/error.hpp"

namespace synthcoll::eval {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string fmt_opt(const std::optional<double>& v, int decimals) {
  return v ? fmt::format("{:.{}f}", *v, decimals) : std::string("-");
}

nlohmann::ordered_json json_opt(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json();
}

}  // namespace

std::vector<Annotation> read_annotations_csv(std::string_view text) {
  std::vector<Annotation> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      throw ParseError(fmt::format("annotations line {}: expected topic_id,doc_id,label", line_no),
                       line_no);
    }
    Annotation a{std::string(trim(line.substr(0, c1))),
                 std::string(trim(line.substr(c1 + 1, c2 - c1 - 1))), 0};
    const auto label = trim(line.substr(c2 + 1));
    if (line_no == 1 && a.topic_id == "topic_id") continue;
    if (label == "1") {
      a.label = 1;
    } else if (label != "0") {
      throw ParseError(fmt::format("annotations line {}: label must be 0 or 1", line_no), line_no);
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Annotation> load_annotations(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  const std::string text{std::istreambuf_iterator<char>(in), {}};
  return read_annotations_csv(text);
}

std::string write_annotations_csv(const std::vector<Annotation>& annotations) {
  std::string out = "topic_id,doc_id,label\n";
  for (const auto& a : annotations) out += fmt::format("{},{},{}\n", a.topic_id, a.doc_id, a.label);
  return out;
}

std::optional<double> AuditRow::relevance_rate() const {
  return ratio(relevant_confirmed, relevant_annotated);
}

std::optional<double> AuditRow::nonrelevance_rate() const {
  return ratio(nonrelevant_confirmed, nonrelevant_annotated);
}

AuditReport judgment_audit(const forge::Corpus& corpus,
                           const std::vector<Annotation>& annotations) {
  std::unordered_map<std::string_view, const forge::GeneratedDoc*> docs;
  for (const auto& d : corpus) docs.emplace(d.doc_id, &d);
  std::map<std::string, AuditRow> rows;
  AuditReport report;
  for (const auto& a : annotations) {
    const auto it = docs.find(a.doc_id);
    if (it == docs.end()) throw Error("annotation for unknown document " + a.doc_id);
    if (a.label != 0 && a.label != 1) throw Error("annotation label must be 0 or 1");
    const auto& d = *it->second;
    if (d.category == forge::Category::kRandom) {
      ++report.ignored_random;
      continue;
    }
    if (!d.topic_id || *d.topic_id != a.topic_id) {
      throw Error(fmt::format("annotation pairs topic {} with document {} of topic {}", a.topic_id,
                              a.doc_id, d.topic_id.value_or("-")));
    }
    auto& row = rows[a.topic_id];
    row.topic_id = a.topic_id;
    if (forge::is_relevant_category(d.category)) {
      ++row.relevant_annotated;
      row.relevant_confirmed += a.label == 1;
    } else {
      ++row.nonrelevant_annotated;
      row.nonrelevant_confirmed += a.label == 0;
    }
  }
  double macro_rel = 0, macro_non = 0;
  std::size_t n_rel = 0, n_non = 0;
  std::size_t rc = 0, ra = 0, nc = 0, na = 0;
  for (auto& [t, row] : rows) {
    if (const auto r = row.relevance_rate()) {
      macro_rel += *r;
      ++n_rel;
    }
    if (const auto r = row.nonrelevance_rate()) {
      macro_non += *r;
      ++n_non;
    }
    rc += row.relevant_confirmed;
    ra += row.relevant_annotated;
    nc += row.nonrelevant_confirmed;
    na += row.nonrelevant_annotated;
    report.rows.push_back(row);
  }
  if (n_rel) report.macro_relevance = macro_rel / static_cast<double>(n_rel);
  if (n_non) report.macro_nonrelevance = macro_non / static_cast<double>(n_non);
  report.pooled_relevance = ratio(rc, ra);
  report.pooled_nonrelevance = ratio(nc, na);
  return report;
}

std::string AuditReport::to_tsv(int decimals) const {
  std::string out = "topic\trelevance_rate\trelevant_confirmed\trelevant_annotated\t"
                    "nonrelevance_rate\tnonrelevant_confirmed\tnonrelevant_annotated\n";
  for (const auto& r : rows) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\n", r.topic_id, fmt_opt(r.relevance_rate(), decimals),
                       r.relevant_confirmed, r.relevant_annotated,
                       fmt_opt(r.nonrelevance_rate(), decimals), r.nonrelevant_confirmed,
                       r.nonrelevant_annotated);
  }
  out += fmt::format("macro\t{}\t\t\t{}\t\t\n", fmt_opt(macro_relevance, decimals),
                     fmt_opt(macro_nonrelevance, decimals));
  out += fmt::format("pooled\t{}\t\t\t{}\t\t\n", fmt_opt(pooled_relevance, decimals),
                     fmt_opt(pooled_nonrelevance, decimals));
  return out;
}

std::string AuditReport::to_json() const {
  nlohmann::ordered_json j;
  auto& rs = j["topics"];
  rs = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    rs.push_back({{"topic_id", r.topic_id},
                  {"relevance_rate", json_opt(r.relevance_rate())},
                  {"relevant_confirmed", r.relevant_confirmed},
                  {"relevant_annotated", r.relevant_annotated},
                  {"nonrelevance_rate", json_opt(r.nonrelevance_rate())},
                  {"nonrelevant_confirmed", r.nonrelevant_confirmed},
                  {"nonrelevant_annotated", r.nonrelevant_annotated}});
  }
  j["macro_relevance"] = json_opt(macro_relevance);
  j["macro_nonrelevance"] = json_opt(macro_nonrelevance);
  j["pooled_relevance"] = json_opt(pooled_relevance);
  j["pooled_nonrelevance"] = json_opt(pooled_nonrelevance);
  j["ignored_random_annotations"] = ignored_random;
  return j.dump(2);
}

}  // namespace synthcoll::eval
