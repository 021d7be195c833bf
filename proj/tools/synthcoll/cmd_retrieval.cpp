#include <fmt/format.h>

#include <iostream>
#include <map>

#include "common.hpp"
#include "synthcoll/error.hpp"
#include "synthcoll/parallel.hpp"
#include "synthcoll/retrieval/bm25.hpp"
#include "synthcoll/retrieval/embedding.hpp"
#include "synthcoll/retrieval/fusion.hpp"
#include "synthcoll/retrieval/index.hpp"
#include "synthcoll/retrieval/rerank.hpp"
#include "synthcoll/retrieval/run.hpp"
#include "synthcoll/retrieval/vector_store.hpp"
#include "synthcoll/text/analyzer.hpp"
#include "synthcoll/text/stopwords.hpp"

namespace synthcoll::cli {

namespace {

text::Analyzer make_analyzer(const std::string& stemmer, const std::string& stopwords) {
  text::AnalyzerOptions o;
  if (stemmer == "porter") {
    o.stemmer = text::Stemmer::kPorter;
  } else if (stemmer == "none") {
    o.stemmer = text::Stemmer::kNone;
  } else {
    throw UsageError("--stemmer must be porter or none");
  }
  if (stopwords == "lucene") {
    o.stopwords = text::retrieval_stopwords();
  } else if (stopwords != "none") {
    throw UsageError("--stopwords must be lucene or none");
  }
  return text::Analyzer(std::move(o));
}

std::unique_ptr<retrieval::EmbeddingClient> make_embedder(const std::string& kind_flag, const Config& cfg,
                                                          std::uint32_t dim, const std::string& seed) {
  const std::string kind = kind_flag.empty() ? cfg.get_string("embedding.type", "mock") : kind_flag;
  if (kind == "mock") return std::make_unique<retrieval::MockEmbedder>(dim, seed);
  if (kind == "http") {
    retrieval::HttpEmbedderOptions o;
    o.url = cfg.get_string("embedding.url", "");
    o.api_key = cfg.get_string("embedding.api_key", "");
    o.timeout = std::chrono::seconds(cfg.get_int("embedding.timeout_s", 120));
    o.retry.max_attempts = static_cast<int>(cfg.get_int("embedding.max_attempts", 5));
    o.retry.initial_backoff = std::chrono::milliseconds(cfg.get_int("embedding.initial_backoff_ms", 1000));
    if (o.url.empty()) throw UsageError("the http embedder needs embedding.url in --config");
    return std::make_unique<retrieval::HttpEmbedder>(o);
  }
  throw UsageError("unknown embedder '" + kind + "' (expected mock or http)");
}

std::unique_ptr<retrieval::RerankClient> make_reranker(const std::string& kind_flag, const Config& cfg) {
  const std::string kind = kind_flag.empty() ? cfg.get_string("rerank.type", "mock") : kind_flag;
  if (kind == "mock") return std::make_unique<retrieval::MockReranker>();
  if (kind == "http") {
    retrieval::HttpRerankerOptions o;
    o.url = cfg.get_string("rerank.url", "");
    o.api_key = cfg.get_string("rerank.api_key", "");
    o.timeout = std::chrono::seconds(cfg.get_int("rerank.timeout_s", 120));
    o.retry.max_attempts = static_cast<int>(cfg.get_int("rerank.max_attempts", 5));
    o.retry.initial_backoff = std::chrono::milliseconds(cfg.get_int("rerank.initial_backoff_ms", 1000));
    if (o.url.empty()) throw UsageError("the http reranker needs rerank.url in --config");
    return std::make_unique<retrieval::HttpReranker>(o);
  }
  throw UsageError("unknown scorer '" + kind + "' (expected mock or http)");
}

std::string query_text(const Topic& t, const std::string& field) {
  if (field == "title") return t.title;
  if (field == "description") return t.description;
  if (field == "title+description") return t.title + "\n" + t.description;
  throw UsageError("--query-field must be title, description or title+description");
}

struct SearchArgs {
  Common common;
  std::string index, vectors, topics, topic_format = "auto", model = "bm25", out, tag, query_field = "title";
  std::string embedder, seed = "0";
  std::size_t k = 1000;
  double k1 = 0.9, b = 0.4, alpha = 0.5;
};

int run_search(const SearchArgs& a, const Registry& reg) {
  if (a.model != "bm25" && a.model != "dense" && a.model != "hybrid") {
    throw UsageError("--model must be bm25, dense or hybrid");
  }
  const bool lexical = a.model != "dense";
  const bool dense = a.model != "bm25";
  if (lexical && a.index.empty()) throw UsageError("--model " + a.model + " needs --index");
  if (dense && a.vectors.empty()) throw UsageError("--model " + a.model + " needs --vectors");
  if (a.k == 0) throw UsageError("--k must be positive");
  const retrieval::Bm25Params params{a.k1, a.b};
  retrieval::validate(params);
  if (a.model == "hybrid" && (a.alpha < 0 || a.alpha > 1)) throw UsageError("--alpha must be in [0, 1]");

  const auto topics = load_topic_file(a.topics, a.topic_format);
  std::vector<std::string> queries;
  queries.reserve(topics.size());
  for (const auto& t : topics) queries.push_back(query_text(t, a.query_field));

  Manifest m("search");
  m.set_argv(reg.argv);
  m.set_config_digest(a.common.config_digest());
  m.set_seed(a.seed);
  m.set_path(manifest_location(a.common, a.out, "search"));
  m.add_input(a.topics);

  const std::size_t n = topics.size();
  const std::size_t jobs = a.common.effective_jobs();
  std::vector<std::vector<RunEntry>> sparse(n), vec(n);
  if (lexical) {
    m.add_input(a.index);
    const auto index = retrieval::Index::load(a.index);
    const std::string tag = a.model == "bm25" && !a.tag.empty() ? a.tag : "bm25";
    parallel_for(n, jobs, [&](std::size_t i) {
      sparse[i] = retrieval::bm25_search(index, queries[i], params, a.k, topics[i].id, tag);
    });
  }
  if (dense) {
    m.add_input(a.vectors);
    const auto store = retrieval::VectorStore::load(a.vectors);
    const auto client = make_embedder(a.embedder, a.common.config(), store.dim(), a.seed);
    const auto qvecs = client->embed(queries);
    if (qvecs.size() != n) throw Error("embedder returned the wrong number of query vectors");
    const std::string tag = a.model == "dense" && !a.tag.empty() ? a.tag : "dense";
    parallel_for(n, jobs, [&](std::size_t i) {
      vec[i] = retrieval::dense_search(store, qvecs[i], a.k, topics[i].id, tag);
    });
  }
  const auto concat = [](std::vector<std::vector<RunEntry>>& parts) {
    Run run;
    for (auto& p : parts) run.insert(run.end(), p.begin(), p.end());
    return run;
  };
  Run run;
  if (a.model == "bm25") {
    run = concat(sparse);
  } else if (a.model == "dense") {
    run = concat(vec);
  } else {
    run = retrieval::fuse(concat(sparse), concat(vec), a.alpha, a.k, a.tag.empty() ? "hybrid" : a.tag);
  }
  emit(a.out, write_run(run));
  if (!a.out.empty() && a.out != "-") m.add_output(a.out);
  m.note("model", a.model);
  m.write();
  return kOk;
}

}  // namespace

void register_retrieval(CLI::App& app, Registry& reg) {
  {
    struct Args {
      Common common;
      std::string corpus, out, stemmer = "porter", stopwords = "lucene";
    };
    auto a = std::make_shared<Args>();
    auto* sub = app.add_subcommand("index", "Build a BM25 inverted index");
    add_common(*sub, a->common);
    sub->add_option("--corpus", a->corpus, "Corpus JSONL or TREC SGML")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", a->out, "Index file")->required();
    sub->add_option("--stemmer", a->stemmer, "porter or none")->capture_default_str();
    sub->add_option("--stopwords", a->stopwords, "lucene or none")->capture_default_str();
    reg.actions[sub] = [a, &reg] {
      const auto analyzer = make_analyzer(a->stemmer, a->stopwords);
      const auto corpus = load_corpus_file(a->corpus);
      const auto index = retrieval::Index::build(corpus, analyzer);
      index.save(a->out);
      Manifest m("index");
      m.set_argv(reg.argv);
      m.set_config_digest(a->common.config_digest());
      m.set_path(manifest_location(a->common, a->out, "index"));
      m.add_input(a->corpus);
      m.add_output(a->out);
      m.write();
      std::cerr << fmt::format("indexed {} documents (avgdl {:.1f})\n", index.doc_count(), index.avgdl());
      return kOk;
    };
  }
  {
    struct Args {
      Common common;
      std::string corpus, out, embedder, progress, seed = "0";
      std::uint32_t dim = 64;
      std::size_t batch = 32;
    };
    auto a = std::make_shared<Args>();
    auto* sub = app.add_subcommand("embed", "Embed a corpus into a dense vector store");
    add_common(*sub, a->common);
    sub->add_option("--corpus", a->corpus, "Corpus JSONL or TREC SGML")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", a->out, "Vector store file")->required();
    sub->add_option("--embedder", a->embedder, "mock or http (default: from config, else mock)");
    sub->add_option("--dim", a->dim, "Mock embedding dimensionality")->capture_default_str();
    sub->add_option("--seed", a->seed, "Mock embedding seed")->capture_default_str();
    sub->add_option("--batch", a->batch, "Texts per request")->capture_default_str();
    sub->add_option("--progress", a->progress, "Resumable progress file (default: <out>.progress)");
    reg.actions[sub] = [a, &reg] {
      if (a->dim == 0 || a->batch == 0) throw UsageError("--dim and --batch must be positive");
      const auto corpus = load_corpus_file(a->corpus);
      const auto client = make_embedder(a->embedder, a->common.config(), a->dim, a->seed);
      const std::string progress = a->progress.empty() ? a->out + ".progress" : a->progress;
      const auto store = retrieval::embed_corpus(corpus, *client, a->batch, progress);
      store.save(a->out);
      Manifest m("embed");
      m.set_argv(reg.argv);
      m.set_seed(a->seed);
      m.set_config_digest(a->common.config_digest());
      m.set_path(manifest_location(a->common, a->out, "embed"));
      m.add_input(a->corpus);
      m.add_output(a->out);
      m.add_output(a->out + ".ids");
      m.note("embedder", std::string(client->name()));
      m.write();
      return kOk;
    };
  }
  {
    auto a = std::make_shared<SearchArgs>();
    auto* sub = app.add_subcommand("search", "Retrieve a TREC run for a topic set");
    add_common(*sub, a->common);
    sub->add_option("--topics", a->topics, "Topic file")->required()->check(CLI::ExistingFile);
    sub->add_option("--topic-format", a->topic_format, "trec, jsonl or auto")->capture_default_str();
    sub->add_option("--model", a->model, "bm25, dense or hybrid")->capture_default_str();
    sub->add_option("--index", a->index, "Index file (bm25, hybrid)");
    sub->add_option("--vectors", a->vectors, "Vector store (dense, hybrid)");
    sub->add_option("--embedder", a->embedder, "Query embedder: mock or http");
    sub->add_option("--seed", a->seed, "Mock embedding seed")->capture_default_str();
    sub->add_option("--k", a->k, "Results per topic")->capture_default_str();
    sub->add_option("--k1", a->k1, "BM25 k1")->capture_default_str();
    sub->add_option("--b", a->b, "BM25 b")->capture_default_str();
    sub->add_option("--alpha", a->alpha, "Hybrid weight of the BM25 run")->capture_default_str();
    sub->add_option("--tag", a->tag, "Run tag (default: model name)");
    sub->add_option("--query-field", a->query_field, "title, description or title+description")
        ->capture_default_str();
    sub->add_option("--out", a->out, "Run file (default: stdout)");
    reg.actions[sub] = [a, &reg] { return run_search(*a, reg); };
  }
  {
    struct Args {
      Common common;
      std::string run, topics, topic_format = "auto", corpus, out, scorer, tag = "rerank",
          query_field = "title";
      std::size_t depth = 100;
    };
    auto a = std::make_shared<Args>();
    auto* sub = app.add_subcommand("rerank", "Rescore the head of a run with a reranking service");
    add_common(*sub, a->common);
    sub->add_option("--run", a->run, "Input run")->required()->check(CLI::ExistingFile);
    sub->add_option("--topics", a->topics, "Topic file")->required()->check(CLI::ExistingFile);
    sub->add_option("--topic-format", a->topic_format, "trec, jsonl or auto")->capture_default_str();
    sub->add_option("--corpus", a->corpus, "Corpus with the document texts")->required()->check(CLI::ExistingFile);
    sub->add_option("--depth", a->depth, "Entries rescored per topic")->capture_default_str();
    sub->add_option("--scorer", a->scorer, "mock or http (default: from config, else mock)");
    sub->add_option("--tag", a->tag, "Run tag")->capture_default_str();
    sub->add_option("--query-field", a->query_field, "title, description or title+description")
        ->capture_default_str();
    sub->add_option("--out", a->out, "Run file (default: stdout)");
    reg.actions[sub] = [a, &reg] {
      if (a->depth == 0) throw UsageError("--depth must be positive");
      const auto run = load_run(a->run);
      const auto topics = load_topic_file(a->topics, a->topic_format);
      std::map<std::string, std::string, std::less<>> queries;
      for (const auto& t : topics) queries[t.id] = query_text(t, a->query_field);
      const auto corpus = load_corpus_file(a->corpus);
      std::map<std::string, std::string, std::less<>> texts;
      for (const auto& d : corpus) texts[d.doc_id] = d.full_text();
      const retrieval::TextLookup lookup = [&texts](const std::string& id) -> const std::string* {
        const auto it = texts.find(id);
        return it == texts.end() ? nullptr : &it->second;
      };
      const auto client = make_reranker(a->scorer, a->common.config());
      const auto out = retrieval::rerank(run, queries, lookup, *client, a->depth, a->tag);
      emit(a->out, write_run(out));
      Manifest m("rerank");
      m.set_argv(reg.argv);
      m.set_config_digest(a->common.config_digest());
      m.set_path(manifest_location(a->common, a->out, "rerank"));
      m.add_input(a->run);
      m.add_input(a->topics);
      m.add_input(a->corpus);
      if (!a->out.empty() && a->out != "-") m.add_output(a->out);
      m.write();
      return kOk;
    };
  }
}

}  // namespace synthcoll::cli
