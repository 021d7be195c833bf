#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include "common.hpp"
#include "synthcoll/error.hpp"
#include "synthcoll/eval/ablation.hpp"
#include "synthcoll/eval/audit.hpp"
#include "synthcoll/eval/kendall.hpp"
#include "synthcoll/eval/metrics.hpp"
#include "synthcoll/forge/qrels.hpp"
#include "synthcoll/retrieval/run.hpp"

namespace synthcoll::cli {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::pair<std::string, std::string> split_pair(const std::string& arg, const char* flag) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
    throw UsageError(fmt::format("{} expects NAME=PATH, got '{}'", flag, arg));
  }
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

std::vector<std::size_t> depths_for(const std::vector<eval::MetricId>& metrics) {
  std::set<std::size_t> ks{10, 100};
  for (const auto& m : metrics) {
    if (m.kind == eval::MetricId::Kind::kPrecision) ks.insert(m.k);
  }
  return {ks.begin(), ks.end()};
}

eval::MetricId parse_metric_flag(const std::string& s) {
  try {
    return eval::parse_metric(s);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
}

std::string run_tag(const Run& run, const std::string& path) {
  if (!run.empty()) return run.front().tag;
  return std::filesystem::path(path).stem().string();
}

struct CorrelateArgs {
  Common common;
  std::vector<std::string> collections;
  std::vector<std::string> runs;
  std::string metric = "map", variant = "tau_b", out, format = "tsv";
  int decimals = 4;
};

int run_correlate(const CorrelateArgs& a, const Registry& reg) {
  if (a.collections.size() < 2) throw UsageError("correlate needs at least two --collection NAME=QRELS");
  const auto metric = parse_metric_flag(a.metric);
  const auto variant = eval::parse_tau_variant(a.variant);
  Manifest m("correlate");
  m.set_argv(reg.argv);
  m.set_config_digest(a.common.config_digest());
  m.set_path(manifest_location(a.common, a.out, "correlate"));

  std::map<std::string, Qrels, std::less<>> qrels;
  for (const auto& c : a.collections) {
    auto [name, path] = split_pair(c, "--collection");
    if (qrels.contains(name)) throw UsageError("duplicate collection name '" + name + "'");
    m.add_input(path);
    qrels.emplace(name, load_qrels(path));
  }
  // Plain paths apply to every collection; NAME=PATH to one.
  std::vector<std::string> shared;
  std::map<std::string, std::vector<std::string>, std::less<>> own;
  for (const auto& r : a.runs) {
    const auto eq = r.find('=');
    if (eq != std::string::npos && qrels.contains(std::string_view(r).substr(0, eq))) {
      own[r.substr(0, eq)].push_back(r.substr(eq + 1));
    } else {
      shared.push_back(r);
    }
  }
  const auto ks = depths_for({metric});
  std::map<std::string, std::vector<eval::MetricReport>, std::less<>> reports;
  for (const auto& [name, q] : qrels) {
    auto paths = shared;
    if (const auto it = own.find(name); it != own.end()) paths.insert(paths.end(), it->second.begin(), it->second.end());
    if (paths.size() < 2) throw UsageError("collection '" + name + "' has fewer than two runs");
    std::set<std::string> tags;
    for (const auto& p : paths) {
      m.add_input(p);
      const auto run = load_run(p);
      auto rep = eval::evaluate_run(run, q, ks);
      rep.run_tag = run_tag(run, p);
      if (!tags.insert(rep.run_tag).second) {
        throw UsageError("collection '" + name + "' has two runs tagged '" + rep.run_tag + "'");
      }
      reports[name].push_back(std::move(rep));
    }
  }
  const auto table = eval::tau_table(reports, metric, variant);
  emit(a.out, a.format == "json" ? table.to_json() + "\n" : table.to_tsv(a.decimals));
  if (!a.out.empty() && a.out != "-") m.add_output(a.out);
  m.note("metric", metric.name());
  m.write();
  return kOk;
}

struct AblateArgs {
  Common common;
  std::string corpus, qrels, out_dir, exclude;
  std::vector<std::string> runs;
  std::size_t cap_rel = 0, downsample = 0, repeats = 1;
  std::uint64_t seed = 0;
};

int run_ablate(const AblateArgs& a, const Registry& reg) {
  eval::AblationSpec spec;
  for (const auto& name : split_list(a.exclude)) {
    try {
      spec.exclude.insert(forge::parse_category(name));
    } catch (const std::exception&) {
      throw UsageError("unknown category '" + name + "' in --exclude");
    }
  }
  if (a.cap_rel > 0) spec.cap_relevant = a.cap_rel;
  if (a.downsample > 0) spec.downsample = eval::Downsample{a.downsample, a.repeats, a.seed};
  try {
    eval::validate(spec);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
  const auto corpus = load_corpus_file(a.corpus);
  const auto qrels = load_qrels(a.qrels);
  auto collections = eval::apply_ablation(corpus, qrels, spec);
  if (!a.runs.empty()) {
    std::vector<Run> runs;
    for (const auto& p : a.runs) runs.push_back(load_run(p));
    std::vector<const Run*> ptrs;
    for (const auto& r : runs) ptrs.push_back(&r);
    for (auto& c : collections) c = eval::remove_unretrieved(c.corpus, c.qrels, ptrs);
  }

  const std::filesystem::path dir(a.out_dir);
  Manifest m("ablate");
  m.set_argv(reg.argv);
  m.set_seed(std::to_string(a.seed));
  m.set_config_digest(a.common.config_digest());
  m.set_path(a.common.manifest_path.empty() ? (dir / "manifest.json").string() : a.common.manifest_path);
  m.add_input(a.corpus);
  m.add_input(a.qrels);
  for (const auto& p : a.runs) m.add_input(p);
  for (std::size_t i = 0; i < collections.size(); ++i) {
    const auto sub = collections.size() == 1 ? dir : dir / fmt::format("rep-{:03}", i);
    std::filesystem::create_directories(sub);
    const auto cpath = (sub / "corpus.jsonl").string();
    const auto qpath = (sub / "qrels.txt").string();
    forge::save_corpus(collections[i].corpus, cpath);
    save_qrels(collections[i].qrels, qpath);
    m.add_output(cpath);
    m.add_output(qpath);
    std::cerr << fmt::format("{}: {} documents, {} judgments\n", sub.string(), collections[i].corpus.size(),
                             collections[i].qrels.size());
  }
  m.write();
  return kOk;
}

}  // namespace

void register_eval(CLI::App& app, Registry& reg) {
  {
    struct Args {
      Common common;
      std::string qrels, run, metrics = "map,rprec,P.10,P.100", out, format = "tsv";
      int decimals = 4;
      std::size_t cutoff = 1000;
    };
    auto a = std::make_shared<Args>();
    auto* sub = app.add_subcommand("eval", "Score a run against qrels");
    add_common(*sub, a->common);
    sub->add_option("--qrels", a->qrels, "Qrels file")->required()->check(CLI::ExistingFile);
    sub->add_option("--run", a->run, "Run file")->required()->check(CLI::ExistingFile);
    sub->add_option("--metrics", a->metrics, "Comma-separated: map, rprec, P.k")->capture_default_str();
    sub->add_option("--decimals", a->decimals, "Decimals in TSV output")->capture_default_str();
    sub->add_option("--cutoff", a->cutoff, "Ranks considered by AP")->capture_default_str();
    sub->add_option("--format", a->format, "tsv or json")->capture_default_str()->check(CLI::IsMember({"tsv", "json"}));
    sub->add_option("--out", a->out, "Output file (default: stdout)");
    reg.actions[sub] = [a, &reg] {
      std::vector<eval::MetricId> metrics;
      try {
        metrics = eval::parse_metric_list(a->metrics);
      } catch (const PreconditionError& e) {
        throw UsageError(e.what());
      }
      if (a->decimals < 0 || a->decimals > 17) throw UsageError("--decimals must be in [0, 17]");
      const auto qrels = load_qrels(a->qrels);
      const auto run = load_run(a->run);
      auto report = eval::evaluate_run(run, qrels, depths_for(metrics), a->cutoff);
      report.run_tag = run_tag(run, a->run);
      for (const auto& t : report.flagged) {
        std::cerr << fmt::format("topic {} has no relevant documents; not evaluated\n", t);
      }
      emit(a->out, a->format == "json" ? report.to_json() + "\n" : report.to_tsv(metrics, a->decimals));
      Manifest m("eval");
      m.set_argv(reg.argv);
      m.set_config_digest(a->common.config_digest());
      m.set_path(manifest_location(a->common, a->out, "eval"));
      m.add_input(a->qrels);
      m.add_input(a->run);
      if (!a->out.empty() && a->out != "-") m.add_output(a->out);
      m.write();
      return kOk;
    };
  }
  {
    auto a = std::make_shared<CorrelateArgs>();
    auto* sub = app.add_subcommand("correlate", "Kendall's tau between system rankings on several collections");
    add_common(*sub, a->common);
    sub->add_option("--collection", a->collections, "NAME=QRELS (repeatable)")->required();
    sub->add_option("--run", a->runs, "Run file for every collection, or NAME=RUN for one (repeatable)")
        ->required();
    sub->add_option("--metric", a->metric, "Ranking metric")->capture_default_str();
    sub->add_option("--variant", a->variant, "tau_a or tau_b")->capture_default_str();
    sub->add_option("--decimals", a->decimals, "Decimals in TSV output")->capture_default_str();
    sub->add_option("--format", a->format, "tsv or json")->capture_default_str()->check(CLI::IsMember({"tsv", "json"}));
    sub->add_option("--out", a->out, "Output file (default: stdout)");
    reg.actions[sub] = [a, &reg] { return run_correlate(*a, reg); };
  }
  {
    auto a = std::make_shared<AblateArgs>();
    auto* sub = app.add_subcommand("ablate", "Derive a reduced collection");
    add_common(*sub, a->common);
    sub->add_option("--corpus", a->corpus, "Corpus")->required()->check(CLI::ExistingFile);
    sub->add_option("--qrels", a->qrels, "Qrels")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", a->out_dir, "Output directory")->required();
    sub->add_option("--exclude", a->exclude, "Categories to drop: TRICKY_NONREL, RANDOM (comma-separated)");
    sub->add_option("--cap-rel", a->cap_rel, "Keep at most N relevant docs per topic (0: no cap)");
    sub->add_option("--downsample", a->downsample, "Keep N random documents (0: all)");
    sub->add_option("--repeats", a->repeats, "Downsampling repetitions")->capture_default_str();
    sub->add_option("--seed", a->seed, "Downsampling seed")->capture_default_str();
    sub->add_option("--run", a->runs, "Drop docs none of these runs retrieved (repeatable)");
    reg.actions[sub] = [a, &reg] { return run_ablate(*a, reg); };
  }
  {
    struct Args {
      Common common;
      std::string corpus, annotations, out, format = "tsv";
      int decimals = 4;
    };
    auto a = std::make_shared<Args>();
    auto* sub = app.add_subcommand("audit", "Compare constructed judgments with human annotations");
    add_common(*sub, a->common);
    sub->add_option("--corpus", a->corpus, "Corpus")->required()->check(CLI::ExistingFile);
    sub->add_option("--annotations", a->annotations, "CSV topic_id,doc_id,label")->required()->check(CLI::ExistingFile);
    sub->add_option("--decimals", a->decimals, "Decimals in TSV output")->capture_default_str();
    sub->add_option("--format", a->format, "tsv or json")->capture_default_str()->check(CLI::IsMember({"tsv", "json"}));
    sub->add_option("--out", a->out, "Output file (default: stdout)");
    reg.actions[sub] = [a, &reg] {
      const auto corpus = load_corpus_file(a->corpus);
      const auto ann = eval::load_annotations(a->annotations);
      const auto report = eval::judgment_audit(corpus, ann);
      if (report.ignored_random > 0) {
        std::cerr << fmt::format("ignored {} annotations on random documents\n", report.ignored_random);
      }
      emit(a->out, a->format == "json" ? report.to_json() + "\n" : report.to_tsv(a->decimals));
      Manifest m("audit");
      m.set_argv(reg.argv);
      m.set_config_digest(a->common.config_digest());
      m.set_path(manifest_location(a->common, a->out, "audit"));
      m.add_input(a->corpus);
      m.add_input(a->annotations);
      if (!a->out.empty() && a->out != "-") m.add_output(a->out);
      m.write();
      return kOk;
    };
  }
}

}  // namespace synthcoll::cli
