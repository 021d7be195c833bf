#include "synthcoll/stats/lexical.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "synthcoll/error.hpp"
#include "synthcoll/parallel.hpp"
#include "synthcoll/text/analyzer.hpp"
#include "synthcoll/text/porter.hpp"

namespace synthcoll::stats {

namespace {

std::size_t type_count(const std::vector<std::string>& tokens) {
  std::unordered_set<std::string_view> types(tokens.begin(), tokens.end());
  return types.size();
}

template <class It>
double mtld_range(It first, It last, double threshold, std::size_t total) {
  std::unordered_set<std::string_view> types;
  std::size_t count = 0;
  double factors = 0;
  for (It it = first; it != last; ++it) {
    types.insert(*it);
    ++count;
    const double t = static_cast<double>(types.size()) / static_cast<double>(count);
    if (t < threshold) {
      factors += 1;
      types.clear();
      count = 0;
    }
  }
  if (count > 0) {
    const double t = static_cast<double>(types.size()) / static_cast<double>(count);
    factors += (1.0 - t) / (1.0 - threshold);
  }
  if (factors == 0) throw Error("text too uniform for MTLD");
  return static_cast<double>(total) / factors;
}

}  // namespace

double ttr(const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw PreconditionError("TTR of an empty token stream");
  return static_cast<double>(type_count(tokens)) / static_cast<double>(tokens.size());
}

double maas(std::size_t n, std::size_t v) {
  if (n == 0 || v == 0 || v > n) throw PreconditionError("Maas needs 0 < V <= N");
  if (n == v) return 0;
  const double ln = std::log10(static_cast<double>(n));
  return (ln - std::log10(static_cast<double>(v))) / (ln * ln);
}

double hdd(const std::vector<std::string>& tokens, std::size_t sample) {
  const std::size_t n = tokens.size();
  if (sample == 0 || n < sample) {
    throw PreconditionError(fmt::format("HDD needs at least {} tokens, got {}", sample, n));
  }
  std::unordered_map<std::string_view, std::size_t> counts;
  for (const auto& t : tokens) ++counts[t];
  // Deterministic summation order.
  std::vector<std::size_t> freq;
  freq.reserve(counts.size());
  for (const auto& [t, c] : counts) freq.push_back(c);
  std::sort(freq.begin(), freq.end());
  double sum = 0;
  for (const auto c : freq) {
    double p0 = 1;  // C(n - c, s) / C(n, s)
    if (n - c < sample) {
      p0 = 0;
    } else {
      for (std::size_t i = 0; i < sample; ++i) {
        p0 *= static_cast<double>(n - c - i) / static_cast<double>(n - i);
      }
    }
    sum += 1.0 - p0;
  }
  return sum / static_cast<double>(sample);
}

double mtld_pass(const std::vector<std::string>& tokens, double threshold) {
  return mtld_range(tokens.begin(), tokens.end(), threshold, tokens.size());
}

double mtld(const std::vector<std::string>& tokens, double threshold) {
  if (tokens.empty()) throw PreconditionError("MTLD of an empty token stream");
  const double fwd = mtld_range(tokens.begin(), tokens.end(), threshold, tokens.size());
  const double bwd = mtld_range(tokens.rbegin(), tokens.rend(), threshold, tokens.size());
  return (fwd + bwd) / 2.0;
}

LexicalScores lexical_diversity(const std::vector<std::string>& tokens) {
  LexicalScores s;
  s.n = tokens.size();
  if (s.n == 0) throw PreconditionError("lexical diversity of an empty document");
  s.v = type_count(tokens);
  std::unordered_set<std::string> stems;
  for (const auto& t : tokens) stems.insert(text::porter_stem(t));
  s.unique_stems = stems.size();
  s.ttr = static_cast<double>(s.v) / static_cast<double>(s.n);
  s.maas = maas(s.n, s.v);
  if (s.n >= kHddSampleSize) s.hdd = hdd(tokens);
  if (s.n >= kMtldMinTokens) {
    try {
      s.mtld = mtld(tokens);
    } catch (const Error&) {
      s.mtld.reset();
    }
  }
  return s;
}

LexicalScores lexical_diversity_text(std::string_view text) {
  return lexical_diversity(text::Analyzer::plain().analyze(text));
}

LexicalReport lexical_report(const forge::Corpus& corpus, std::size_t jobs) {
  if (corpus.empty()) throw Error("empty corpus");
  LexicalReport r;
  r.docs.resize(corpus.size());
  const auto plain = text::Analyzer::plain();
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    r.docs[i] = lexical_diversity(plain.analyze(corpus[i].full_text()));
  });
  double hdd_sum = 0, mtld_sum = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& d = r.docs[i];
    r.doc_ids.push_back(corpus[i].doc_id);
    r.mean_ttr += d.ttr;
    r.mean_maas += d.maas;
    r.mean_unique += static_cast<double>(d.v);
    r.mean_unique_stems += static_cast<double>(d.unique_stems);
    if (d.hdd) {
      hdd_sum += *d.hdd;
      ++r.hdd_docs;
    }
    if (d.mtld) {
      mtld_sum += *d.mtld;
      ++r.mtld_docs;
    }
  }
  const double n = static_cast<double>(corpus.size());
  r.mean_ttr /= n;
  r.mean_maas /= n;
  r.mean_unique /= n;
  r.mean_unique_stems /= n;
  if (r.hdd_docs) r.mean_hdd = hdd_sum / static_cast<double>(r.hdd_docs);
  if (r.mtld_docs) r.mean_mtld = mtld_sum / static_cast<double>(r.mtld_docs);
  return r;
}

namespace {

std::string fmt_opt(const std::optional<double>& v, int decimals) {
  return v ? fmt::format("{:.{}f}", *v, decimals) : std::string("-");
}

nlohmann::ordered_json json_opt(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json();
}

}  // namespace

std::string LexicalReport::to_tsv(int decimals) const {
  std::string out = "doc_id\tN\tV\tunique_stems\tttr\tmaas\thdd\tmtld\n";
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& d = docs[i];
    out += fmt::format("{}\t{}\t{}\t{}\t{:.{}f}\t{:.{}f}\t{}\t{}\n", doc_ids[i], d.n, d.v, d.unique_stems,
                       d.ttr, decimals, d.maas, decimals, fmt_opt(d.hdd, decimals),
                       fmt_opt(d.mtld, decimals));
  }
  out += fmt::format("mean\t-\t{:.{}f}\t{:.{}f}\t{:.{}f}\t{:.{}f}\t{}\t{}\n", mean_unique, decimals,
                     mean_unique_stems, decimals, mean_ttr, decimals, mean_maas, decimals,
                     fmt_opt(mean_hdd, decimals), fmt_opt(mean_mtld, decimals));
  return out;
}

std::string LexicalReport::to_json() const {
  nlohmann::ordered_json j;
  j["documents"] = docs.size();
  j["mean_ttr"] = mean_ttr;
  j["mean_maas"] = mean_maas;
  j["mean_hdd"] = json_opt(mean_hdd);
  j["hdd_documents"] = hdd_docs;
  j["mean_mtld"] = json_opt(mean_mtld);
  j["mtld_documents"] = mtld_docs;
  j["mean_unique_words"] = mean_unique;
  j["mean_unique_stems"] = mean_unique_stems;
  j["lemma_counts_are_stem_proxy"] = kLemmaIsStemProxy;
  auto& per = j["per_doc"];
  per = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& d = docs[i];
    per.push_back({{"doc_id", doc_ids[i]},
                   {"N", d.n},
                   {"V", d.v},
                   {"unique_stems", d.unique_stems},
                   {"ttr", d.ttr},
                   {"maas", d.maas},
                   {"hdd", json_opt(d.hdd)},
                   {"mtld", json_opt(d.mtld)}});
  }
  return j.dump(2);
}

}  // namespace synthcoll::stats
