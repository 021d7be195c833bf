// Acceptance checks. `synthcoll_acceptance --criterion N` runs one check;
// without arguments every check runs. Each prints a single PASS/FAIL line.
#include <fmt/format.h>
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "synthcoll/eval/ablation.hpp"
#include "synthcoll/eval/audit.hpp"
#include "synthcoll/eval/collection_stats.hpp"
#include "synthcoll/eval/kendall.hpp"
#include "synthcoll/eval/metrics.hpp"
#include "synthcoll/forge/pipeline.hpp"
#include "synthcoll/genclient/ledger.hpp"
#include "synthcoll/retrieval/bm25.hpp"
#include "synthcoll/retrieval/embedding.hpp"
#include "synthcoll/retrieval/fusion.hpp"
#include "synthcoll/retrieval/index.hpp"
#include "synthcoll/retrieval/vector_store.hpp"
#include "synthcoll/stats/lexical.hpp"
#include "synthcoll/stats/readability.hpp"
#include "synthcoll/text/stopwords.hpp"
#include "test_support.hpp"

using namespace synthcoll;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, std::string what) {
    if (!ok) pass = false;
    notes.push_back((ok ? "" : "!") + std::move(what));
  }
};

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

std::string run_cli(const std::string& args, int& status) {
#ifdef SYNTHCOLL_CLI
  const std::string cmd = std::string("\"") + SYNTHCOLL_CLI + "\" " + args + " 2>&1";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int raw = pclose(pipe);
  status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
#else
  (void)args;
  status = -1;
  return {};
#endif
}

// 1: cost of a token ledger.
Outcome criterion_cost() {
  Outcome o;
  const auto ledger = genclient::UsageLedger::from_totals({1'924'000, 61'700'000});
  const auto reloaded = genclient::UsageLedger::from_json(ledger.to_json());
  const auto est = genclient::cost_estimate(reloaded, genclient::PriceTable{1.50, 2.00, 0.015});
  o.check(near(est.usd, 126.29, 0.01), fmt::format("usd={:.4f} (want 126.29+-0.01)", est.usd));
#ifdef SYNTHCOLL_CLI
  testing::TempDir dir;
  testing::spit(dir.file("ledger.json"), ledger.to_json());
  int status = 0;
  const auto out = run_cli("cost --ledger \"" + dir.file("ledger.json") + "\" --price-in 1.50 --price-out 2.00", status);
  o.check(status == 0 && out.find("usd\t126.29\n") != std::string::npos, "cli prints usd\\t126.29");
#endif
  return o;
}

// 2: energy of a token count.
Outcome criterion_energy() {
  Outcome o;
  const auto est = genclient::cost_estimate(genclient::Usage{63'600'000, 0}, genclient::PriceTable{});
  o.check(near(est.kwh, 954.0, 0.5), fmt::format("kwh={:.4f} (want 954+-0.5)", est.kwh));
  return o;
}

// 3: collection arithmetic from a manifest.
Outcome criterion_collection() {
  Outcome o;
  const auto s = eval::collection_stats_from_manifest(R"({"documents":96196,"relevant":18964,"topics":300})");
  o.check(near(s.relevant_ratio, 0.197, 0.001), fmt::format("ratio={:.5f} (want 0.197+-0.001)", s.relevant_ratio));
  o.check(near(s.mean_relevant_per_topic, 63.2, 0.1),
          fmt::format("rel/topic={:.4f} (want 63.2+-0.1)", s.mean_relevant_per_topic));
  return o;
}

// Brute-force trec_eval semantics written independently of the library:
// every quantity is recounted from scratch at every rank.
struct OracleTopic {
  std::map<std::size_t, double> p_at;
  double ap = 0;
  double rprec = 0;
};

OracleTopic oracle_topic(const std::vector<std::string>& ranked, const std::set<std::string>& rel,
                         const std::vector<std::size_t>& ks) {
  const auto hits_in_top = [&](std::size_t k) {
    std::size_t h = 0;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) h += rel.count(ranked[i]);
    return h;
  };
  OracleTopic t;
  for (auto k : ks) t.p_at[k] = static_cast<double>(hits_in_top(k)) / static_cast<double>(k);
  double sum = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (rel.count(ranked[i])) sum += static_cast<double>(hits_in_top(i + 1)) / static_cast<double>(i + 1);
  }
  t.ap = sum / static_cast<double>(rel.size());
  t.rprec = static_cast<double>(hits_in_top(rel.size())) / static_cast<double>(rel.size());
  return t;
}

// 4: metric oracle on random instances.
Outcome criterion_metrics() {
  Outcome o;
  std::mt19937_64 rng(20240614);
  const std::vector<std::size_t> ks{1, 2, 3, 5, 10};
  const auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  double worst = 0;
  std::size_t instances = 0, evaluated_topics = 0, mismatched_topics = 0;
  for (int inst = 0; inst < 1000; ++inst) {
    const int topics = pick(1, 3);
    Qrels qrels;
    Run run;
    std::map<std::string, std::vector<std::string>> ranked;
    std::map<std::string, std::set<std::string>> rel;
    for (int t = 0; t < topics; ++t) {
      const std::string tid = std::to_string(100 + t);
      const int universe = pick(1, 8);
      for (int d = 0; d < universe; ++d) {
        const auto doc = "d" + std::to_string(d);
        const int roll = pick(0, 3);  // unjudged, non-relevant, relevant, highly relevant
        if (roll == 0) continue;
        qrels.add({tid, doc, roll - 1});
        if (roll >= 2) rel[tid].insert(doc);
      }
      std::vector<int> order(static_cast<std::size_t>(universe));
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      order.resize(static_cast<std::size_t>(pick(0, universe)));
      for (std::size_t i = 0; i < order.size(); ++i) {
        const auto doc = "d" + std::to_string(order[i]);
        ranked[tid].push_back(doc);
        run.push_back({tid, doc, static_cast<std::uint32_t>(i + 1), 100.0 - static_cast<double>(i), "sys"});
      }
    }
    const auto report = eval::evaluate_run(run, qrels, ks);
    ++instances;
    std::size_t n = 0;
    OracleTopic mean;
    bool topic_set_ok = true;
    for (const auto& [tid, docs] : ranked) {
      if (docs.empty()) continue;
      const auto it = rel.find(tid);
      const bool judged = it != rel.end() && !it->second.empty();
      const auto got = report.per_topic.find(tid);
      if (!judged) {
        topic_set_ok &= got == report.per_topic.end();
        continue;
      }
      ++n;
      ++evaluated_topics;
      if (got == report.per_topic.end()) {
        topic_set_ok = false;
        continue;
      }
      const auto want = oracle_topic(docs, it->second, ks);
      double diff = std::max(std::fabs(want.ap - got->second.ap), std::fabs(want.rprec - got->second.rprec));
      for (auto k : ks) diff = std::max(diff, std::fabs(want.p_at.at(k) - got->second.p_at.at(k)));
      if (diff > 1e-12) ++mismatched_topics;
      worst = std::max(worst, diff);
      mean.ap += want.ap;
      mean.rprec += want.rprec;
      for (auto k : ks) mean.p_at[k] += want.p_at.at(k);
    }
    if (!topic_set_ok || report.evaluated_topics() != n) ++mismatched_topics;
    if (n > 0) {
      const double dn = static_cast<double>(n);
      double diff = std::max(std::fabs(mean.ap / dn - report.value(eval::parse_metric("map"))),
                             std::fabs(mean.rprec / dn - report.value(eval::parse_metric("rprec"))));
      for (auto k : ks) {
        diff = std::max(diff, std::fabs(mean.p_at[k] / dn - report.mean.p_at.at(k)));
      }
      if (diff > 1e-12) ++mismatched_topics;
      worst = std::max(worst, diff);
    }
  }
  o.check(instances == 1000, fmt::format("instances={}", instances));
  o.check(mismatched_topics == 0 && worst <= 1e-12,
          fmt::format("topics={} mismatches={} max|diff|={:.3g} (want <=1e-12)", evaluated_topics,
                      mismatched_topics, worst));
  return o;
}

// 5: Kendall tau_a over all permutations of six.
Outcome criterion_tau() {
  Outcome o;
  std::vector<double> identity{1, 2, 3, 4, 5, 6};
  std::vector<double> p = identity;
  std::size_t perms = 0, bad = 0;
  do {
    long c = 0, d = 0;
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = i + 1; j < 6; ++j) {
        const double s = (identity[i] - identity[j]) * (p[i] - p[j]);
        if (s > 0) ++c;
        if (s < 0) ++d;
      }
    }
    const double want = static_cast<double>(c - d) / 15.0;
    if (eval::kendall_tau(identity, p, eval::TauVariant::kTauA).tau != want) ++bad;
    ++perms;
  } while (std::next_permutation(p.begin(), p.end()));
  const std::vector<double> reversed{6, 5, 4, 3, 2, 1};
  const double same = eval::kendall_tau(identity, identity, eval::TauVariant::kTauA).tau;
  const double rev = eval::kendall_tau(identity, reversed, eval::TauVariant::kTauA).tau;
  o.check(perms == 720 && bad == 0, fmt::format("perms={} mismatches={}", perms, bad));
  o.check(same == 1.0 && rev == -1.0, fmt::format("identical={} reversed={}", same, rev));
  return o;
}

forge::ForgeConfig determinism_config() {
  forge::ForgeConfig cfg;
  cfg.subtopics_requested = 10;
  cfg.seed = "42";
  cfg.concurrency = 4;
  return cfg;
}

struct ForgeBytes {
  std::string corpus, qrels, ledger;
  bool complete = false;
  friend bool operator==(const ForgeBytes&, const ForgeBytes&) = default;
};

ForgeBytes bytes_of(const forge::ForgeResult& r) {
  return {forge::write_corpus_jsonl(r.corpus), write_qrels(r.qrels), r.ledger.to_json(), r.complete};
}

// 6: pipeline determinism, yield and resume.
Outcome criterion_pipeline() {
  Outcome o;
  const auto topics = testing::sample_topics(5);
  const auto cfg = determinism_config();
  genclient::MockOptions mo;
  mo.seed_salt = cfg.seed;
  const auto first = forge::run_forge(topics, cfg, genclient::MockProvider(mo));
  const auto second = forge::run_forge(topics, cfg, genclient::MockProvider(mo));
  const auto a = bytes_of(first);
  const auto b = bytes_of(second);
  o.check(a.complete && a == b, fmt::format("two runs byte-identical (corpus {} B, qrels {} B, ledger {} B)",
                                            a.corpus.size(), a.qrels.size(), a.ledger.size()));

  bool counts_ok = true;
  for (const auto& t : topics) {
    std::size_t rel = 0, tnr = 0;
    for (const auto& d : first.corpus) {
      if (d.topic_id != t.id) continue;
      if (forge::is_relevant_category(d.category)) ++rel;
      if (d.category == forge::Category::kTrickyNonrel) ++tnr;
    }
    counts_ok &= rel == 11 && tnr == 50 && first.qrels.relevant_count(t.id) == 11;
  }
  o.check(counts_ok, "per topic 11 relevant and 50 TNR");

  testing::TempDir dir;
  forge::ForgeOptions opts;
  opts.journal_path = dir.file("journal.jsonl");
  std::size_t interruptions = 0;
  forge::ForgeResult resumed;
  for (std::size_t budget : {37u, 101u}) {
    opts.max_new_units = budget;
    resumed = forge::run_forge(topics, cfg, genclient::MockProvider(mo), opts);
    if (!resumed.complete) ++interruptions;
  }
  opts.max_new_units.reset();
  resumed = forge::run_forge(topics, cfg, genclient::MockProvider(mo), opts);
  o.check(interruptions == 2 && bytes_of(resumed) == a,
          fmt::format("interrupted twice, resumed output identical (reused {} units, new {})", resumed.reused_units,
                      resumed.new_units));
  return o;
}

double hand_bm25(double n, double df, double tf, double dl, double avgdl, double k1, double b) {
  const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
  return idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * dl / avgdl));
}

text::Analyzer unstemmed() {
  text::AnalyzerOptions opt;
  opt.stopwords = text::retrieval_stopwords();
  opt.stemmer = text::Stemmer::kNone;
  return text::Analyzer(opt);
}

std::string query_of(const Topic& t) { return t.title + " " + t.description; }

// 7: BM25 scoring, permutation invariance and a perfect run.
Outcome criterion_bm25() {
  Outcome o;
  text::AnalyzerOptions bare;
  bare.stemmer = text::Stemmer::kNone;
  const std::vector<retrieval::IndexDoc> fixture{{"d1", "ocean tide ocean"}, {"d2", "tide"}, {"d3", "storm surge warning"}};
  const auto idx = retrieval::Index::build(fixture, text::Analyzer(bare));
  const auto r = retrieval::bm25_search(idx, "ocean tide", {0.9, 0.4}, 10);
  const double avgdl = 7.0 / 3.0;
  const double d1 = hand_bm25(3, 1, 2, 3, avgdl, 0.9, 0.4) + hand_bm25(3, 2, 1, 3, avgdl, 0.9, 0.4);
  const double d2 = hand_bm25(3, 2, 1, 1, avgdl, 0.9, 0.4);
  const bool fixture_ok = r.size() == 2 && r[0].doc_id == "d1" && r[1].doc_id == "d2" &&
                          near(r[0].score, d1, 1e-9) && near(r[1].score, d2, 1e-9);
  o.check(fixture_ok, fmt::format("fixture d1={:.9f} d2={:.9f} vs hand {:.9f} {:.9f}", r.empty() ? 0.0 : r[0].score,
                                  r.size() < 2 ? 0.0 : r[1].score, d1, d2));

  forge::ForgeConfig cfg;
  cfg.subtopics_requested = 6;
  cfg.random_docs_total = 60;
  cfg.concurrency = 2;
  const auto topics = testing::sample_topics(3);
  const auto col = forge::run_forge(topics, cfg, genclient::MockProvider{});
  const auto index = retrieval::Index::build(col.corpus, text::Analyzer::english());
  auto shuffled = col.corpus;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(3));
  const auto index2 = retrieval::Index::build(shuffled, text::Analyzer::english());
  bool invariant = true;
  for (const auto& t : topics) {
    const auto x = retrieval::bm25_search(index, query_of(t), {}, 1000, t.id);
    const auto y = retrieval::bm25_search(index2, query_of(t), {}, 1000, t.id);
    invariant &= x.size() == y.size() && !x.empty();
    for (std::size_t i = 0; invariant && i < x.size(); ++i) {
      invariant &= x[i].doc_id == y[i].doc_id && x[i].rank == y[i].rank && near(x[i].score, y[i].score, 1e-12);
    }
  }
  // Fixture permutations as well.
  std::vector<retrieval::IndexDoc> perm = fixture;
  std::sort(perm.begin(), perm.end(), [](const auto& l, const auto& r2) { return l.doc_id < r2.doc_id; });
  do {
    const auto rr = retrieval::bm25_search(retrieval::Index::build(perm, text::Analyzer(bare)), "ocean tide", {0.9, 0.4}, 10);
    invariant &= rr.size() == r.size() && rr[0].doc_id == r[0].doc_id && rr[0].score == r[0].score;
  } while (std::next_permutation(perm.begin(), perm.end(),
                                 [](const auto& l, const auto& r2) { return l.doc_id < r2.doc_id; }));
  o.check(invariant, fmt::format("ranking invariant under corpus permutation ({} docs)", col.corpus.size()));

  Run perfect;
  for (const auto& t : topics) {
    std::vector<std::string> rel, rest;
    for (const auto& d : col.corpus) (col.qrels.is_relevant(t.id, d.doc_id) ? rel : rest).push_back(d.doc_id);
    rel.insert(rel.end(), rest.begin(), rest.end());
    for (std::size_t i = 0; i < rel.size(); ++i) {
      perfect.push_back({t.id, rel[i], static_cast<std::uint32_t>(i + 1), 1e6 - static_cast<double>(i), "oracle"});
    }
  }
  const auto rep = eval::evaluate_run(perfect, col.qrels);
  const double map = rep.value(eval::parse_metric("map"));
  const double rprec = rep.value(eval::parse_metric("rprec"));
  o.check(map == 1.0 && rprec == 1.0 && rep.evaluated_topics() == 3,
          fmt::format("perfect run MAP={} RPrec={}", map, rprec));
  return o;
}

// 8: lexical diversity and readability oracles.
Outcome criterion_textstats() {
  Outcome o;
  const std::vector<std::string> ab{"a", "b", "a", "b", "a", "b", "a", "b", "a"};
  const double m = stats::mtld(ab);
  o.check(m == 3.0, fmt::format("mtld={}", m));
  const double maas = stats::maas(100, 50);
  o.check(near(maas, 0.075257, 1e-6), fmt::format("maas={:.7f}", maas));

  std::vector<std::string> tokens;
  for (int i = 0; i < 60; ++i) tokens.push_back("w" + std::to_string((i * i + 3 * i) % 23));
  const double h = stats::hdd(tokens);
  std::mt19937_64 rng(99);
  std::vector<std::string> pool = tokens;
  double total = 0;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    // Partial Fisher-Yates: the first 42 slots become a sample without replacement.
    for (std::size_t i = 0; i < 42; ++i) {
      std::uniform_int_distribution<std::size_t> u(i, pool.size() - 1);
      std::swap(pool[i], pool[u(rng)]);
    }
    std::set<std::string> seen(pool.begin(), pool.begin() + 42);
    total += static_cast<double>(seen.size()) / 42.0;
  }
  const double mc = total / draws;
  o.check(near(h, mc, 0.01), fmt::format("hdd={:.5f} monte-carlo={:.5f}", h, mc));

  const auto r = stats::readability("The cat sat on the mat.");
  o.check(near(r.kincaid, -1.45, 1e-3) && near(r.fre, 116.145, 1e-3) && near(r.ari, -5.085, 1e-3),
          fmt::format("kincaid={:.4f} fre={:.4f} ari={:.4f}", r.kincaid, r.fre, r.ari));
  return o;
}

// 9: judgment audit on the ten annotated topics.
Outcome criterion_audit() {
  struct Row {
    const char* topic;
    int rel_ok, rel_n, non_ok, non_n;
    double rel_rate, non_rate;
  };
  const Row rows[] = {
      {"402", 33, 49, 60, 60, 0.67, 1.00}, {"416", 42, 42, 66, 66, 1.00, 1.00}, {"417", 61, 63, 43, 43, 0.97, 1.00},
      {"419", 47, 48, 42, 42, 0.98, 1.00}, {"429", 25, 29, 60, 66, 0.86, 0.91}, {"430", 0, 48, 52, 60, 0.00, 0.87},
      {"434", 86, 86, 64, 66, 1.00, 0.97}, {"437", 68, 68, 27, 42, 1.00, 0.64}, {"438", 35, 44, 60, 60, 0.80, 1.00},
      {"441", 67, 79, 59, 60, 0.85, 0.98},
  };
  forge::Corpus corpus;
  std::vector<eval::Annotation> ann;
  for (const auto& row : rows) {
    for (int i = 0; i < row.rel_n; ++i) {
      forge::GeneratedDoc d;
      d.category = i == 0 ? forge::Category::kInitRelevant : forge::Category::kSubtopicRelevant;
      d.topic_id = row.topic;
      d.doc_id = forge::make_doc_id(d.topic_id, d.category, static_cast<std::uint32_t>(i == 0 ? 1 : i));
      d.body = "x";
      ann.push_back({row.topic, d.doc_id, i < row.rel_ok ? 1 : 0});
      corpus.push_back(std::move(d));
    }
    for (int i = 0; i < row.non_n; ++i) {
      forge::GeneratedDoc d;
      d.category = forge::Category::kTrickyNonrel;
      d.topic_id = row.topic;
      d.doc_id = forge::make_doc_id(d.topic_id, d.category, static_cast<std::uint32_t>(i + 1));
      d.body = "x";
      ann.push_back({row.topic, d.doc_id, i < row.non_ok ? 0 : 1});
      corpus.push_back(std::move(d));
    }
  }
  const auto rep = eval::judgment_audit(corpus, ann);
  Outcome o;
  bool per_topic = rep.rows.size() == std::size(rows);
  for (std::size_t i = 0; per_topic && i < rep.rows.size(); ++i) {
    per_topic &= rep.rows[i].topic_id == rows[i].topic &&
                 near(*rep.rows[i].relevance_rate(), rows[i].rel_rate, 0.005) &&
                 near(*rep.rows[i].nonrelevance_rate(), rows[i].non_rate, 0.005);
  }
  o.check(per_topic, fmt::format("per-topic rates (402 -> {:.4f})", *rep.rows.at(0).relevance_rate()));
  o.check(near(*rep.macro_relevance, 0.83, 0.005), fmt::format("macro relevance={:.4f} (want 0.83+-0.005)", *rep.macro_relevance));
  o.check(near(*rep.macro_nonrelevance, 0.94, 0.005),
          fmt::format("macro non-relevance={:.4f} (want 0.94+-0.005)", *rep.macro_nonrelevance));
  o.notes.push_back(fmt::format("pooled {:.4f}/{:.4f}", *rep.pooled_relevance, *rep.pooled_nonrelevance));
  return o;
}

struct Systems {
  std::vector<Run> runs;
};

Systems run_systems(const forge::Corpus& corpus, const std::vector<Topic>& topics) {
  const auto stemmed = retrieval::Index::build(corpus, text::Analyzer::english());
  const auto plain = retrieval::Index::build(corpus, unstemmed());
  const retrieval::MockEmbedder embedder;
  const auto store = retrieval::embed_corpus(corpus, embedder);
  Systems s;
  s.runs.resize(4);
  for (const auto& t : topics) {
    const auto q = query_of(t);
    const auto a = retrieval::bm25_search(stemmed, q, {}, 100, t.id, "bm25-porter");
    const auto b = retrieval::bm25_search(plain, q, {}, 100, t.id, "bm25-plain");
    const auto c = retrieval::dense_search(store, retrieval::embed_query(embedder, q), 100, t.id, "dense");
    s.runs[0].insert(s.runs[0].end(), a.begin(), a.end());
    s.runs[1].insert(s.runs[1].end(), b.begin(), b.end());
    s.runs[2].insert(s.runs[2].end(), c.begin(), c.end());
  }
  s.runs[3] = retrieval::fuse(s.runs[0], s.runs[2], 0.5, 100, "hybrid");
  return s;
}

// 10: end-to-end desk experiment.
Outcome criterion_end_to_end() {
  Outcome o;
  const auto topics = testing::sample_topics(5);
  forge::ForgeConfig cfg;
  cfg.subtopics_requested = 10;
  cfg.random_docs_total = 500;
  const auto full = forge::run_forge(topics, cfg, genclient::MockProvider{});
  o.check(full.complete && full.corpus.size() == 5 * 61 + 500, fmt::format("corpus={} docs", full.corpus.size()));

  eval::AblationSpec no_tnr, no_random;
  no_tnr.exclude = {forge::Category::kTrickyNonrel};
  no_random.exclude = {forge::Category::kRandom};
  std::map<std::string, eval::Collection> collections;
  collections["full"] = {full.corpus, full.qrels};
  collections["no-tnr"] = eval::apply_ablation(full.corpus, full.qrels, no_tnr).at(0);
  collections["no-random"] = eval::apply_ablation(full.corpus, full.qrels, no_random).at(0);

  std::map<std::string, std::vector<eval::MetricReport>, std::less<>> reports;
  Systems full_systems;
  for (const auto& [name, col] : collections) {
    auto systems = run_systems(col.corpus, topics);
    for (const auto& r : systems.runs) {
      auto rep = eval::evaluate_run(r, col.qrels);
      rep.run_tag = r.front().tag;
      reports[name].push_back(std::move(rep));
    }
    if (name == "full") full_systems = std::move(systems);
  }
  std::string maps;
  for (const auto& [name, reps] : reports) {
    maps += " " + name + ":";
    for (const auto& rep : reps) maps += fmt::format(" {}={:.4f}", rep.run_tag, rep.value(eval::parse_metric("map")));
  }
  o.notes.push_back("MAP" + maps);
  try {
    const auto map_table = eval::tau_table(reports, eval::parse_metric("map"), eval::TauVariant::kTauB);
    std::string cells;
    for (std::size_t i = 0; i < map_table.collections.size(); ++i) {
      for (std::size_t j = i + 1; j < map_table.collections.size(); ++j) {
        const auto& cell = map_table.matrix[i][j];
        cells += fmt::format(" {}~{}={}", map_table.collections[i], map_table.collections[j],
                             cell ? fmt::format("{:.3f}", *cell) : std::string("NA"));
      }
    }
    for (const auto& d : map_table.degenerate) cells += " (" + d + ": all systems tied)";
    o.check(map_table.collections.size() == 3, "tau(MAP) table:" + cells);
  } catch (const std::exception& e) {
    o.check(false, std::string("tau table failed: ") + e.what());
  }

  std::vector<const Run*> run_ptrs;
  for (const auto& r : full_systems.runs) run_ptrs.push_back(&r);
  const auto reduced = eval::remove_unretrieved(full.corpus, full.qrels, run_ptrs);
  bool identical = true;
  for (std::size_t i = 0; i < full_systems.runs.size(); ++i) {
    const auto before = eval::evaluate_run(full_systems.runs[i], full.qrels).to_json();
    const auto after = eval::evaluate_run(full_systems.runs[i], reduced.qrels).to_json();
    identical &= before == after;
  }
  o.check(identical && reduced.corpus.size() < full.corpus.size(),
          fmt::format("pruned {} -> {} docs, metrics bit-identical", full.corpus.size(), reduced.corpus.size()));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> fn;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "cost", 1, criterion_cost},
      {2, "energy", 1, criterion_energy},
      {3, "collection arithmetic", 1, criterion_collection},
      {4, "metric oracle", 10, criterion_metrics},
      {5, "tau oracle", 1, criterion_tau},
      {6, "pipeline determinism", 30, criterion_pipeline},
      {7, "bm25 correctness", 5, criterion_bm25},
      {8, "lexical/readability oracles", 10, criterion_textstats},
      {9, "judgment audit", 1, criterion_audit},
      {10, "end-to-end desk experiment", 60, criterion_end_to_end},
  };
  return all;
}

bool run_one(const Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.fn();
  } catch (const std::exception& e) {
    o.check(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.check(secs < c.limit_s, fmt::format("{:.3f}s (limit {}s)", secs, c.limit_s));
  std::string notes;
  for (const auto& n : o.notes) notes += (notes.empty() ? "" : "; ") + n;
  fmt::print("criterion {:>2} {:<28} {}  {}\n", c.id, c.name, o.pass ? "PASS" : "FAIL", notes);
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      fmt::print(stderr, "usage: {} [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  bool ok = true;
  bool matched = false;
  for (const auto& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    matched = true;
    ok &= run_one(c);
  }
  if (!matched) {
    fmt::print(stderr, "no criterion {}\n", only);
    return 2;
  }
  return ok ? 0 : 1;
}
