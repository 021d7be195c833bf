#include <fmt/format.h>

#include <iostream>
#include <nlohmann/json.hpp>
#include <set>

#include "common.hpp"
#include "synthcoll/error.hpp"
#include "synthcoll/eval/collection_stats.hpp"
#include "synthcoll/forge/qrels.hpp"
#include "synthcoll/genclient/ledger.hpp"
#include "synthcoll/stats/lexical.hpp"
#include "synthcoll/stats/readability.hpp"
#include "synthcoll/stats/structure.hpp"

namespace synthcoll::cli {

namespace {

struct AnalyzeArgs {
  Common common;
  std::string corpus, qrels, counts, metrics = "structure,lexical,readability", out, format = "tsv";
  int decimals = 4;
};

int run_analyze(const AnalyzeArgs& a, const Registry& reg) {
  static const std::vector<std::string> kKnown{"structure", "lexical", "readability", "collection"};
  std::set<std::string> wanted;
  std::size_t start = 0;
  while (start <= a.metrics.size()) {
    const auto end = std::min(a.metrics.find(',', start), a.metrics.size());
    const auto name = a.metrics.substr(start, end - start);
    if (!name.empty()) {
      if (std::find(kKnown.begin(), kKnown.end(), name) == kKnown.end()) {
        throw UsageError("unknown analysis '" + name + "' (structure, lexical, readability, collection)");
      }
      wanted.insert(name);
    }
    start = end + 1;
  }
  if (wanted.empty()) throw UsageError("--metrics is empty");
  const bool text_needed = wanted.contains("structure") || wanted.contains("lexical") ||
                           wanted.contains("readability") ||
                           (wanted.contains("collection") && a.counts.empty());
  if (text_needed && a.corpus.empty()) throw UsageError("--corpus is required for these analyses");
  if (wanted.contains("collection") && a.counts.empty() && a.qrels.empty()) {
    throw UsageError("collection statistics need --qrels or --counts");
  }

  Manifest m("analyze");
  m.set_argv(reg.argv);
  m.set_config_digest(a.common.config_digest());
  m.set_path(manifest_location(a.common, a.out, "analyze"));
  forge::Corpus corpus;
  if (text_needed) {
    m.add_input(a.corpus);
    corpus = load_corpus_file(a.corpus);
  }
  const std::size_t jobs = a.common.effective_jobs();
  std::string tsv;
  nlohmann::ordered_json json = nlohmann::ordered_json::object();
  const auto add = [&](const std::string& name, const std::string& section_tsv, const std::string& section_json) {
    if (!tsv.empty()) tsv += "\n";
    tsv += "# " + name + "\n" + section_tsv;
    json[name] = nlohmann::ordered_json::parse(section_json);
  };
  for (const auto& name : kKnown) {
    if (!wanted.contains(name)) continue;
    if (name == "structure") {
      const auto r = stats::structure_stats(corpus, jobs);
      add(name, r.to_tsv(a.decimals), r.to_json());
    } else if (name == "lexical") {
      const auto r = stats::lexical_report(corpus, jobs);
      add(name, r.to_tsv(a.decimals), r.to_json());
    } else if (name == "readability") {
      const auto r = stats::readability_report(corpus, jobs);
      if (r.skipped_empty > 0) std::cerr << fmt::format("skipped {} empty documents\n", r.skipped_empty);
      add(name, r.to_tsv(a.decimals), r.to_json());
    } else {
      eval::CollectionStats r;
      if (!a.counts.empty()) {
        m.add_input(a.counts);
        r = eval::collection_stats_from_manifest(read_text(a.counts));
      } else {
        m.add_input(a.qrels);
        r = eval::collection_stats(corpus, load_qrels(a.qrels));
      }
      add(name, r.to_tsv(a.decimals), r.to_json());
    }
  }
  emit(a.out, a.format == "json" ? json.dump(2) + "\n" : tsv);
  if (!a.out.empty() && a.out != "-") m.add_output(a.out);
  m.write();
  return kOk;
}

struct CostArgs {
  Common common;
  std::string ledger, out;
  std::uint64_t prompt_tokens = 0, completion_tokens = 0;
  genclient::PriceTable prices;
};

int run_cost(const CLI::App& sub, const CostArgs& a, const Registry& reg) {
  const bool by_tokens = sub.count("--prompt-tokens") > 0 || sub.count("--completion-tokens") > 0;
  if (a.ledger.empty() == !by_tokens) {
    throw UsageError("give either --ledger or --prompt-tokens/--completion-tokens");
  }
  if (a.prices.usd_per_million_input < 0 || a.prices.usd_per_million_output < 0 || a.prices.wh_per_token < 0) {
    throw UsageError("prices must be non-negative");
  }
  Manifest m("cost");
  m.set_argv(reg.argv);
  m.set_config_digest(a.common.config_digest());
  m.set_path(manifest_location(a.common, a.out, "cost"));
  genclient::Usage usage;
  if (by_tokens) {
    usage.prompt_tokens = a.prompt_tokens;
    usage.completion_tokens = a.completion_tokens;
  } else {
    m.add_input(a.ledger);
    const auto ledger = genclient::UsageLedger::load(a.ledger);
    usage = ledger.totals();
    if (ledger.estimated_requests() > 0) {
      std::cerr << fmt::format("{} of {} requests carry estimated token counts\n", ledger.estimated_requests(),
                               ledger.requests());
    }
  }
  const auto est = genclient::cost_estimate(usage, a.prices);
  std::string text;
  text += fmt::format("prompt_tokens\t{}\n", usage.prompt_tokens);
  text += fmt::format("completion_tokens\t{}\n", usage.completion_tokens);
  text += fmt::format("total_tokens\t{}\n", usage.total());
  text += fmt::format("usd\t{:.2f}\n", est.usd);
  text += fmt::format("kwh\t{:.4f}\n", est.kwh);
  emit(a.out, text);
  if (!a.out.empty() && a.out != "-") m.add_output(a.out);
  m.write();
  return kOk;
}

}  // namespace

void register_stats(CLI::App& app, Registry& reg) {
  {
    auto a = std::make_shared<AnalyzeArgs>();
    auto* sub = app.add_subcommand("analyze", "Corpus structure, lexical diversity, readability and collection counts");
    add_common(*sub, a->common);
    sub->add_option("--corpus", a->corpus, "Corpus JSONL or TREC SGML")->check(CLI::ExistingFile);
    sub->add_option("--metrics", a->metrics, "structure, lexical, readability, collection")->capture_default_str();
    sub->add_option("--qrels", a->qrels, "Qrels for collection statistics")->check(CLI::ExistingFile);
    sub->add_option("--counts", a->counts, "JSON counts manifest for collection statistics")
        ->check(CLI::ExistingFile);
    sub->add_option("--decimals", a->decimals, "Decimals in TSV output")->capture_default_str();
    sub->add_option("--format", a->format, "tsv or json")->capture_default_str()->check(CLI::IsMember({"tsv", "json"}));
    sub->add_option("--out", a->out, "Output file (default: stdout)");
    reg.actions[sub] = [a, &reg] { return run_analyze(*a, reg); };
  }
  {
    auto a = std::make_shared<CostArgs>();
    auto* sub = app.add_subcommand("cost", "Monetary and energy estimate from token counts");
    add_common(*sub, a->common);
    sub->add_option("--ledger", a->ledger, "Usage ledger JSON")->check(CLI::ExistingFile);
    sub->add_option("--prompt-tokens", a->prompt_tokens, "Prompt tokens (instead of --ledger)");
    sub->add_option("--completion-tokens", a->completion_tokens, "Completion tokens (instead of --ledger)");
    sub->add_option("--price-in", a->prices.usd_per_million_input, "USD per million prompt tokens")
        ->capture_default_str();
    sub->add_option("--price-out", a->prices.usd_per_million_output, "USD per million completion tokens")
        ->capture_default_str();
    sub->add_option("--wh-per-token", a->prices.wh_per_token, "Energy per token in Wh")->capture_default_str();
    sub->add_option("--out", a->out, "Output file (default: stdout)");
    reg.actions[sub] = [sub, a, &reg] { return run_cost(*sub, *a, reg); };
  }
}

}  // namespace synthcoll::cli
