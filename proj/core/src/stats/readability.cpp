#include "synthcoll/stats/readability.hpp"

#include <nlohmann/json.hpp>
#include <optional>

#include <fmt/format.h>

#include "synthcoll/error.hpp"
#include "synthcoll/parallel.hpp"
#include "synthcoll/stats/sentences.hpp"
#include "synthcoll/text/analyzer.hpp"
#include "synthcoll/text/utf8.hpp"

namespace synthcoll::stats {

ReadabilityCounts readability_counts(std::string_view text, const SyllableCounter& syllables) {
  ReadabilityCounts c;
  for (const auto s : split_sentences(text)) {
    const auto ws = text::tokenize(s);
    if (ws.empty()) continue;
    ++c.sentences;
    for (const auto w : ws) {
      ++c.words;
      c.syllables += syllables(w);
      c.letters += text::utf8_length(w);
    }
  }
  return c;
}

ReadabilityScores readability_from_counts(const ReadabilityCounts& c) {
  if (c.words == 0 || c.sentences == 0) {
    throw PreconditionError("readability needs at least one word and one sentence");
  }
  ReadabilityScores r;
  r.counts = c;
  const double wps = static_cast<double>(c.words) / static_cast<double>(c.sentences);
  const double spw = static_cast<double>(c.syllables) / static_cast<double>(c.words);
  const double lpw = static_cast<double>(c.letters) / static_cast<double>(c.words);
  r.kincaid = 0.39 * wps + 11.8 * spw - 15.59;
  r.fre = 206.835 - 1.015 * wps - 84.6 * spw;
  r.ari = 4.71 * lpw + 0.5 * wps - 21.43;
  return r;
}

ReadabilityScores readability(std::string_view text, const SyllableCounter& syllables) {
  const auto c = readability_counts(text, syllables);
  if (c.words == 0) throw Error("empty document");
  return readability_from_counts(c);
}

ReadabilityReport readability_report(const forge::Corpus& corpus, std::size_t jobs) {
  std::vector<std::optional<ReadabilityScores>> scored(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    const auto c = readability_counts(corpus[i].full_text());
    if (c.words > 0) scored[i] = readability_from_counts(c);
  });
  ReadabilityReport r;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!scored[i]) {
      ++r.skipped_empty;
      continue;
    }
    r.doc_ids.push_back(corpus[i].doc_id);
    r.mean_kincaid += scored[i]->kincaid;
    r.mean_fre += scored[i]->fre;
    r.mean_ari += scored[i]->ari;
    r.docs.push_back(*scored[i]);
  }
  if (r.docs.empty()) throw Error("empty corpus");
  const double n = static_cast<double>(r.docs.size());
  r.mean_kincaid /= n;
  r.mean_fre /= n;
  r.mean_ari /= n;
  return r;
}

std::string ReadabilityReport::to_tsv(int decimals) const {
  std::string out = "doc_id\twords\tsentences\tsyllables\tletters\tkincaid\tfre\tari\n";
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& d = docs[i];
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{:.{}f}\t{:.{}f}\t{:.{}f}\n", doc_ids[i], d.counts.words,
                       d.counts.sentences, d.counts.syllables, d.counts.letters, d.kincaid, decimals,
                       d.fre, decimals, d.ari, decimals);
  }
  out += fmt::format("mean\t-\t-\t-\t-\t{:.{}f}\t{:.{}f}\t{:.{}f}\n", mean_kincaid, decimals, mean_fre,
                     decimals, mean_ari, decimals);
  return out;
}

std::string ReadabilityReport::to_json() const {
  nlohmann::ordered_json j;
  j["documents"] = docs.size();
  j["skipped_empty"] = skipped_empty;
  j["mean_kincaid"] = mean_kincaid;
  j["mean_fre"] = mean_fre;
  j["mean_ari"] = mean_ari;
  auto& per = j["per_doc"];
  per = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& d = docs[i];
    per.push_back({{"doc_id", doc_ids[i]},
                   {"words", d.counts.words},
                   {"sentences", d.counts.sentences},
                   {"syllables", d.counts.syllables},
                   {"letters", d.counts.letters},
                   {"kincaid", d.kincaid},
                   {"fre", d.fre},
                   {"ari", d.ari}});
  }
  return j.dump(2);
}

}  // namespace synthcoll::stats
