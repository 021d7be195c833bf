#include <fmt/format.h>

#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>

#include "common.hpp"
#include "synthcoll/error.hpp"
#include "synthcoll/forge/pipeline.hpp"

namespace synthcoll::cli {

namespace {

struct ForgeArgs {
  Common common;
  std::string topics;
  std::string topic_format = "auto";
  std::string out_dir;
  std::string journal;
  std::string provider;
  std::string seed = "0";
  forge::ForgeConfig cfg;
  std::size_t max_units = 0;
};

forge::ForgeConfig merged_config(const CLI::App& sub, const ForgeArgs& a) {
  const Config& c = a.common.config();
  const forge::ForgeConfig defaults;
  forge::ForgeConfig cfg;
  const auto pick = [&](const char* flag, const char* key, auto flag_value, auto fallback) {
    using T = decltype(fallback);
    if (sub.count(flag) > 0) return static_cast<T>(flag_value);
    if constexpr (std::is_same_v<T, std::string>) {
      return c.get_string(key, fallback);
    } else if constexpr (std::is_floating_point_v<T>) {
      return static_cast<T>(c.get_double(key, fallback));
    } else {
      const auto v = c.get_int(key, static_cast<long long>(fallback));
      if (v < 0) throw UsageError(fmt::format("config key {} must be >= 0", key));
      return static_cast<T>(v);
    }
  };
  cfg.subtopics_requested = pick("--subtopics", "forge.subtopics_requested", a.cfg.subtopics_requested,
                                 defaults.subtopics_requested);
  cfg.docs_per_subtopic = pick("--docs-per-subtopic", "forge.docs_per_subtopic", a.cfg.docs_per_subtopic,
                               defaults.docs_per_subtopic);
  cfg.variants_per_topic = pick("--variants", "forge.variants_per_topic", a.cfg.variants_per_topic,
                                defaults.variants_per_topic);
  cfg.docs_per_variant = pick("--docs-per-variant", "forge.docs_per_variant", a.cfg.docs_per_variant,
                              defaults.docs_per_variant);
  cfg.random_docs_total = pick("--random", "forge.random_docs_total", a.cfg.random_docs_total,
                               defaults.random_docs_total);
  cfg.document_type = pick("--document-type", "forge.document_type", a.cfg.document_type,
                           defaults.document_type);
  cfg.max_output_tokens = pick("--max-output-tokens", "forge.max_output_tokens", a.cfg.max_output_tokens,
                               defaults.max_output_tokens);
  cfg.temperature = pick("--temperature", "forge.temperature", a.cfg.temperature, defaults.temperature);
  cfg.concurrency = pick("--concurrency", "forge.concurrency", a.cfg.concurrency, defaults.concurrency);
  cfg.mask.max_terms = pick("--mask-terms", "forge.mask_terms", a.cfg.mask.max_terms, defaults.mask.max_terms);
  cfg.seed = pick("--seed", "forge.seed", a.seed, defaults.seed);
  return cfg;
}

nlohmann::ordered_json report_json(const forge::ForgeResult& r) {
  nlohmann::ordered_json j;
  j["complete"] = r.complete;
  j["documents"] = r.corpus.size();
  j["judgments"] = r.qrels.size();
  j["new_units"] = r.new_units;
  j["reused_units"] = r.reused_units;
  auto& ts = j["topics"];
  ts = nlohmann::ordered_json::array();
  for (const auto& t : r.topics) {
    nlohmann::ordered_json o;
    o["topic_id"] = t.topic_id;
    o["status"] = t.failed ? "failed" : "ok";
    if (t.failed) o["failure"] = t.failure;
    o["relevant_docs"] = t.relevant_docs;
    o["tricky_docs"] = t.tricky_docs;
    o["subtopics_obtained"] = t.subtopics_obtained;
    o["subtopic_shortfall"] = t.subtopic_shortfall;
    o["variants_obtained"] = t.variants_obtained;
    o["variant_shortfall"] = t.variant_shortfall;
    if (!t.mask_error.empty()) o["mask_error"] = t.mask_error;
    ts.push_back(std::move(o));
  }
  return j;
}

int run_forge_cmd(const CLI::App& sub, const ForgeArgs& a, const Registry& reg) {
  const auto cfg = merged_config(sub, a);
  const auto topics = load_topic_file(a.topics, a.topic_format);
  const auto provider = make_provider(a.provider, a.common.config(), cfg.seed);
  std::filesystem::create_directories(a.out_dir);
  const std::filesystem::path dir(a.out_dir);

  forge::ForgeOptions opts;
  opts.journal_path = a.journal.empty() ? (dir / "journal.jsonl").string() : a.journal;
  if (a.max_units > 0) opts.max_new_units = a.max_units;

  Manifest m("forge");
  m.set_argv(reg.argv);
  m.set_seed(cfg.seed);
  m.set_config_digest(a.common.config_digest());
  m.set_path(a.common.manifest_path.empty() ? (dir / "manifest.json").string() : a.common.manifest_path);
  m.add_input(a.topics);
  if (!a.common.config_path.empty()) m.add_input(a.common.config_path);

  const auto result = forge::run_forge(topics, cfg, *provider, opts);
  const auto report_path = (dir / "report.json").string();
  write_text(report_path, report_json(result).dump(2) + "\n");
  m.add_output(opts.journal_path);
  m.add_output(report_path);
  if (!result.complete) {
    m.note("status", "interrupted");
    m.write();
    std::cerr << fmt::format(
        "stopped after {} new units ({} reused); rerun the same command to resume from {}\n",
        result.new_units, result.reused_units, opts.journal_path);
    return kOk;
  }
  const auto corpus_path = (dir / "corpus.jsonl").string();
  const auto qrels_path = (dir / "qrels.txt").string();
  const auto ledger_path = (dir / "ledger.json").string();
  forge::save_corpus(result.corpus, corpus_path);
  save_qrels(result.qrels, qrels_path);
  write_text(ledger_path, result.ledger.to_json() + "\n");
  m.add_output(corpus_path);
  m.add_output(qrels_path);
  m.add_output(ledger_path);
  m.note("status", "complete");
  m.note("provider", std::string(provider->name()));
  m.write();
  std::size_t failed = 0;
  for (const auto& t : result.topics) failed += t.failed;
  std::cerr << fmt::format("{} documents, {} judgments, {} topics ({} failed); {} new units, {} reused\n",
                           result.corpus.size(), result.qrels.size(), result.topics.size(), failed,
                           result.new_units, result.reused_units);
  return kOk;
}

}  // namespace

void register_forge(CLI::App& app, Registry& reg) {
  {
    auto a = std::make_shared<ForgeArgs>();
    auto* sub = app.add_subcommand("forge", "Generate a corpus, qrels and token ledger from topics");
    add_common(*sub, a->common);
    sub->add_option("--topics", a->topics, "Topic file (TREC SGML or JSONL)")->required()->check(CLI::ExistingFile);
    sub->add_option("--topic-format", a->topic_format, "trec, jsonl or auto")->capture_default_str();
    sub->add_option("--out", a->out_dir, "Output directory")->required();
    sub->add_option("--journal", a->journal, "Journal path (default: <out>/journal.jsonl)");
    sub->add_option("--provider", a->provider, "mock or http (default: from config, else mock)");
    sub->add_option("--seed", a->seed, "Mock provider seed")->capture_default_str();
    sub->add_option("--subtopics", a->cfg.subtopics_requested, "Subtopics requested per topic");
    sub->add_option("--docs-per-subtopic", a->cfg.docs_per_subtopic, "Documents per subtopic");
    sub->add_option("--variants", a->cfg.variants_per_topic, "Masked-description variants per topic");
    sub->add_option("--docs-per-variant", a->cfg.docs_per_variant, "Documents per variant");
    sub->add_option("--random", a->cfg.random_docs_total, "Documents on random topics");
    sub->add_option("--document-type", a->cfg.document_type, "Document type named in prompts");
    sub->add_option("--max-output-tokens", a->cfg.max_output_tokens, "Completion budget per request");
    sub->add_option("--temperature", a->cfg.temperature, "Sampling temperature");
    sub->add_option("--concurrency", a->cfg.concurrency, "Topics generated at once");
    sub->add_option("--mask-terms", a->cfg.mask.max_terms, "Keywords masked per description");
    sub->add_option("--max-units", a->max_units, "Stop after this many provider calls (0: no limit)");
    reg.actions[sub] = [sub, a, &reg] { return run_forge_cmd(*sub, *a, reg); };
  }
  {
    struct Args {
      Common common;
      std::string corpus, out;
    };
    auto a = std::make_shared<Args>();
    auto* sub = app.add_subcommand("export-trec", "Write a corpus as TREC SGML <DOC> blocks");
    add_common(*sub, a->common);
    sub->add_option("--corpus", a->corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", a->out, "Output file")->required();
    reg.actions[sub] = [a, &reg] {
      const auto corpus = forge::load_corpus(a->corpus);
      write_text(a->out, forge::export_trec(corpus));
      Manifest m("export-trec");
      m.set_argv(reg.argv);
      m.set_config_digest(a->common.config_digest());
      m.set_path(manifest_location(a->common, a->out, "export-trec"));
      m.add_input(a->corpus);
      m.add_output(a->out);
      m.write();
      return kOk;
    };
  }
}

}  // namespace synthcoll::cli
