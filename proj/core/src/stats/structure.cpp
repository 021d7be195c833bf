#include "synthcoll/stats/structure.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include <fmt/format.h>

#include "synthcoll/error.hpp"
#include "synthcoll/parallel.hpp"
#include "synthcoll/stats/sentences.hpp"
#include "synthcoll/text/analyzer.hpp"

namespace synthcoll::stats {

std::vector<std::string_view> words(std::string_view text) { return text::tokenize(text); }

DocStructure doc_structure(std::string_view text) {
  DocStructure d;
  for (const auto s : split_sentences(text)) {
    const auto n = text::tokenize(s).size();
    if (n == 0) continue;
    d.words_per_sentence.push_back(n);
  }
  d.sentences = d.words_per_sentence.size();
  d.words = text::tokenize(text).size();
  return d;
}

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd r;
  if (values.empty()) return r;
  for (const double v : values) r.mean += v;
  r.mean /= static_cast<double>(values.size());
  double ss = 0;
  for (const double v : values) ss += (v - r.mean) * (v - r.mean);
  r.std = std::sqrt(ss / static_cast<double>(values.size()));
  return r;
}

StructureReport structure_stats(const std::vector<std::string>& texts, std::size_t jobs) {
  if (texts.empty()) throw Error("empty corpus");
  std::vector<DocStructure> docs(texts.size());
  parallel_for(texts.size(), jobs, [&](std::size_t i) { docs[i] = doc_structure(texts[i]); });

  StructureReport r;
  r.doc_count = docs.size();
  std::vector<double> wpd, spd, wps;
  wpd.reserve(docs.size());
  spd.reserve(docs.size());
  r.min_words_per_doc = docs.front().words;
  for (const auto& d : docs) {
    r.total_words += d.words;
    wpd.push_back(static_cast<double>(d.words));
    spd.push_back(static_cast<double>(d.sentences));
    for (const auto n : d.words_per_sentence) wps.push_back(static_cast<double>(n));
    r.max_words_per_doc = std::max(r.max_words_per_doc, d.words);
    r.min_words_per_doc = std::min(r.min_words_per_doc, d.words);
  }
  const auto w = mean_std(wpd);
  const auto s = mean_std(spd);
  const auto ws = mean_std(wps);
  r.mean_words_per_doc = w.mean;
  r.std_words_per_doc = w.std;
  r.mean_sentences_per_doc = s.mean;
  r.std_sentences_per_doc = s.std;
  r.mean_words_per_sentence = ws.mean;
  r.std_words_per_sentence = ws.std;
  if (!wps.empty()) {
    std::sort(wps.begin(), wps.end());
    const std::size_t m = wps.size() / 2;
    r.median_words_per_sentence = wps.size() % 2 ? wps[m] : (wps[m - 1] + wps[m]) / 2.0;
  }
  return r;
}

StructureReport structure_stats(const forge::Corpus& corpus, std::size_t jobs) {
  std::vector<std::string> texts;
  texts.reserve(corpus.size());
  for (const auto& d : corpus) texts.push_back(d.full_text());
  return structure_stats(texts, jobs);
}

std::string StructureReport::to_tsv(int decimals) const {
  std::string out;
  const auto num = [&](const char* k, double v) { out += fmt::format("{}\t{:.{}f}\n", k, v, decimals); };
  out += fmt::format("doc_count\t{}\n", doc_count);
  out += fmt::format("total_words\t{}\n", total_words);
  num("mean_words_per_doc", mean_words_per_doc);
  num("std_words_per_doc", std_words_per_doc);
  num("mean_sentences_per_doc", mean_sentences_per_doc);
  num("std_sentences_per_doc", std_sentences_per_doc);
  num("mean_words_per_sentence", mean_words_per_sentence);
  num("median_words_per_sentence", median_words_per_sentence);
  num("std_words_per_sentence", std_words_per_sentence);
  out += fmt::format("max_words_per_doc\t{}\n", max_words_per_doc);
  out += fmt::format("min_words_per_doc\t{}\n", min_words_per_doc);
  return out;
}

std::string StructureReport::to_json() const {
  nlohmann::ordered_json j;
  j["doc_count"] = doc_count;
  j["total_words"] = total_words;
  j["mean_words_per_doc"] = mean_words_per_doc;
  j["std_words_per_doc"] = std_words_per_doc;
  j["mean_sentences_per_doc"] = mean_sentences_per_doc;
  j["std_sentences_per_doc"] = std_sentences_per_doc;
  j["mean_words_per_sentence"] = mean_words_per_sentence;
  j["median_words_per_sentence"] = median_words_per_sentence;
  j["std_words_per_sentence"] = std_words_per_sentence;
  j["max_words_per_doc"] = max_words_per_doc;
  j["min_words_per_doc"] = min_words_per_doc;
  return j.dump(2);
}

}  // namespace synthcoll::stats
