#include "synthcoll/forge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <thread>

#include <fmt/format.h>

#include "synthcoll/error.hpp"
#include "synthcoll/genclient/list_parser.hpp"
#include "synthcoll/genclient/prompts.hpp"
#include "synthcoll/random.hpp"

namespace synthcoll::forge {

using genclient::Bindings;
using genclient::PromptKind;
using genclient::Provider;
using genclient::UsageLedger;

void validate_config(const ForgeConfig& cfg) {
  if (cfg.document_type.find_first_not_of(" \t\n") == std::string::npos) {
    throw PreconditionError("document_type must not be blank");
  }
  if (cfg.concurrency == 0) throw PreconditionError("concurrency must be >= 1");
  if (cfg.max_output_tokens == 0) {
    throw PreconditionError("max_output_tokens must be >= 1");
  }
  if (cfg.mask.max_terms == 0) {
    throw PreconditionError("mask.max_terms must be >= 1");
  }
}

namespace {

constexpr std::string_view kRandomTopic = "R";
constexpr std::size_t kRandomChunk = 25;

// Thrown inside workers when the unit budget is spent or a sibling failed.
struct Interrupted {};

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string salted(std::string prompt, bool salt, std::size_t ordinal) {
  if (salt) prompt += fmt::format("\n\n(#{})", ordinal);
  return prompt;
}

struct Plan {
  std::string init_prompt(const Topic& t) const {
    return genclient::render_prompt(
        PromptKind::kInit,
        {{"description", t.description}, {"document_type", cfg.document_type}});
  }
  // Every request is a fresh session, so the list request restates the topic.
  std::string subtopics_prompt(const Topic& t) const {
    return t.description + "\n\n" +
           genclient::render_prompt(
               PromptKind::kSubtopics,
               {{"count", std::to_string(cfg.subtopics_requested)}});
  }
  std::string subtopic_doc_prompt(const Topic& t, const std::string& sub) const {
    return genclient::render_prompt(
        PromptKind::kDocFromSubtopic,
        {{"subtopic", sub}, {"description", t.description}});
  }
  std::string variants_prompt(const Topic& t, const MaskedTopic& m) const {
    return genclient::render_prompt(
        PromptKind::kAlteredTopics,
        {{"count", std::to_string(cfg.variants_per_topic)},
         {"masked_description", m.masked_text},
         {"description", t.description}});
  }
  std::string tricky_prompt(const std::string& variant) const {
    return genclient::render_prompt(
        PromptKind::kInit,
        {{"description", variant}, {"document_type", cfg.document_type}});
  }
  std::string random_prompt() const {
    return genclient::render_prompt(PromptKind::kRandomDoc,
                                    {{"document_type", cfg.document_type}});
  }

  const ForgeConfig& cfg;
};

class Engine {
 public:
  Engine(const ForgeConfig& cfg, const Provider& provider, Journal* journal,
         std::optional<std::size_t> budget, std::function<std::string()> clock)
      : cfg_(cfg),
        plan_{cfg},
        provider_(provider),
        journal_(journal),
        budget_(budget),
        clock_(std::move(clock)) {
    if (!clock_) {
      if (provider_.deterministic()) {
        clock_ = [] { return std::string("1970-01-01T00:00:00Z"); };
      } else {
        clock_ = utc_now;
      }
    }
  }

  const Plan& plan() const { return plan_; }
  bool salt() const { return provider_.deterministic(); }
  std::size_t new_units() const { return calls_.load(); }
  std::size_t reused_units() const { return reused_.load(); }
  void stop() { stop_.store(true); }

  // Document unit: returns the journaled doc or generates and journals it.
  GeneratedDoc document(const UnitKey& key, Category category, PromptKind kind,
                        const std::string& prompt, GeneratedDoc shape,
                        UsageLedger& ledger) {
    if (auto r = replay(key, category, ledger)) {
      if (!r->doc) throw CheckpointError(where(key) + ": journal record has no doc");
      return *r->doc;
    }
    const auto resp = call(key, prompt);
    split_title_body(resp.text, shape.title, shape.body);
    if (shape.body.empty()) {
      throw CheckpointError(where(key) + ": provider returned an empty document");
    }
    shape.category = category;
    shape.provenance.model_id = resp.model_id;
    shape.provenance.prompt_tokens = resp.usage.prompt_tokens;
    shape.provenance.completion_tokens = resp.usage.completion_tokens;
    shape.provenance.usage_estimated = resp.usage_estimated;
    shape.provenance.prompt_kind = std::string(genclient::prompt_kind_name(kind));
    shape.provenance.created_at = clock_();
    JournalRecord rec{key, resp.usage, resp.usage_estimated, shape, {}, 0, {}};
    commit(rec, category, ledger);
    return shape;
  }

  // List unit. `strict` turns an unparseable reply into a failure record.
  JournalRecord list(const UnitKey& key, Category category,
                     const std::string& prompt, std::size_t expected,
                     bool strict, UsageLedger& ledger) {
    if (auto r = replay(key, category, ledger)) return *r;
    const auto resp = call(key, prompt);
    JournalRecord rec{key, resp.usage, resp.usage_estimated, std::nullopt, {}, 0, {}};
    try {
      auto parsed = genclient::parse_numbered_list(resp.text, expected);
      if (parsed.items.size() > expected) parsed.items.resize(expected);
      rec.items = std::move(parsed.items);
      rec.shortfall = parsed.shortfall;
    } catch (const Error& e) {
      rec.shortfall = expected;
      if (strict) rec.failure = e.what();
    }
    commit(rec, category, ledger);
    return rec;
  }

 private:
  static std::string where(const UnitKey& key) {
    return fmt::format("unit {}/{}/{}", key.topic, phase_name(key.phase),
                       key.ordinal);
  }

  std::optional<JournalRecord> replay(const UnitKey& key, Category category,
                                      UsageLedger& ledger) {
    if (stop_.load()) throw Interrupted{};
    if (!journal_) return std::nullopt;
    const auto* r = journal_->find(key);
    if (!r) return std::nullopt;
    ledger.add(category_name(category), phase_name(key.phase), r->usage,
               r->usage_estimated);
    ++reused_;
    return *r;
  }

  genclient::GenResponse call(const UnitKey& key, const std::string& prompt) {
    if (stop_.load()) throw Interrupted{};
    if (budget_ && calls_.fetch_add(1) >= *budget_) {
      --calls_;
      stop_.store(true);
      throw Interrupted{};
    }
    if (!budget_) ++calls_;
    genclient::GenRequest req;
    req.prompt = prompt;
    req.max_output_tokens = cfg_.max_output_tokens;
    req.temperature = cfg_.temperature;
    try {
      return provider_.generate(req);
    } catch (const ProviderError& e) {
      throw CheckpointError(where(key) + ": " + e.what() +
                            "; rerun with the same journal to resume");
    } catch (const TimeoutError& e) {
      throw CheckpointError(where(key) + ": " + e.what() +
                            "; rerun with the same journal to resume");
    }
  }

  void commit(const JournalRecord& rec, Category category, UsageLedger& ledger) {
    if (journal_) journal_->append(rec);
    ledger.add(category_name(category), phase_name(rec.key.phase), rec.usage,
               rec.usage_estimated);
  }

  const ForgeConfig& cfg_;
  Plan plan_;
  const Provider& provider_;
  Journal* journal_;
  std::optional<std::size_t> budget_;
  std::function<std::string()> clock_;
  std::atomic<std::size_t> calls_{0};
  std::atomic<std::size_t> reused_{0};
  std::atomic<bool> stop_{false};
};

struct TaskOutput {
  std::vector<GeneratedDoc> docs;
  std::optional<TopicReport> report;
  UsageLedger ledger;
};

// Relevant set; returns false when the subtopic list failed.
bool relevant_set(Engine& engine, const Topic& topic, const ForgeConfig& cfg,
                  TaskOutput& out, TopicReport& report) {
  const auto& plan = engine.plan();
  GeneratedDoc shape;
  shape.topic_id = topic.id;
  shape.doc_id = make_doc_id(topic.id, Category::kInitRelevant, 1);
  out.docs.push_back(engine.document({topic.id, Phase::kInit, 1},
                                     Category::kInitRelevant, PromptKind::kInit,
                                     plan.init_prompt(topic), shape, out.ledger));
  if (cfg.subtopics_requested == 0) return true;

  const auto list = engine.list({topic.id, Phase::kSubtopics, 0},
                                Category::kSubtopicRelevant,
                                plan.subtopics_prompt(topic),
                                cfg.subtopics_requested, true, out.ledger);
  report.subtopics_obtained = list.items.size();
  report.subtopic_shortfall = list.shortfall;
  if (!list.failure.empty()) {
    report.failed = true;
    report.failure = "subtopic list: " + list.failure;
    return false;
  }
  const bool salt = engine.salt() && cfg.docs_per_subtopic > 1;
  std::uint32_t ordinal = 0;
  for (const auto& sub : list.items) {
    for (std::size_t c = 0; c < cfg.docs_per_subtopic; ++c) {
      ++ordinal;
      GeneratedDoc s;
      s.topic_id = topic.id;
      s.subtopic = sub;
      s.doc_id = make_doc_id(topic.id, Category::kSubtopicRelevant, ordinal);
      out.docs.push_back(engine.document(
          {topic.id, Phase::kSubtopicDoc, ordinal}, Category::kSubtopicRelevant,
          PromptKind::kDocFromSubtopic,
          salted(plan.subtopic_doc_prompt(topic, sub), salt, ordinal), s,
          out.ledger));
    }
  }
  return true;
}

void tricky_set(Engine& engine, const Topic& topic, const MaskedTopic& masked,
                const ForgeConfig& cfg, TaskOutput& out, TopicReport& report) {
  if (cfg.variants_per_topic == 0 || cfg.docs_per_variant == 0) return;
  const auto& plan = engine.plan();
  const auto list = engine.list({topic.id, Phase::kVariants, 0},
                                Category::kTrickyNonrel,
                                plan.variants_prompt(topic, masked),
                                cfg.variants_per_topic, false, out.ledger);
  report.variants_obtained = list.items.size();
  report.variant_shortfall = list.shortfall;
  std::uint32_t ordinal = 0;
  for (const auto& variant : list.items) {
    for (std::size_t c = 0; c < cfg.docs_per_variant; ++c) {
      ++ordinal;
      GeneratedDoc s;
      s.topic_id = topic.id;
      s.variant_text = variant;
      s.doc_id = make_doc_id(topic.id, Category::kTrickyNonrel, ordinal);
      out.docs.push_back(engine.document(
          {topic.id, Phase::kTrickyDoc, ordinal}, Category::kTrickyNonrel,
          PromptKind::kInit,
          salted(plan.tricky_prompt(variant), engine.salt(), ordinal), s,
          out.ledger));
    }
  }
}

void topic_task(Engine& engine, const Topic& topic, const ForgeConfig& cfg,
                TaskOutput& out) {
  TopicReport report;
  report.topic_id = topic.id;
  if (!relevant_set(engine, topic, cfg, out, report)) {
    out.docs.clear();
    out.report = std::move(report);
    return;
  }
  report.relevant_docs = out.docs.size();
  if (cfg.variants_per_topic > 0 && cfg.docs_per_variant > 0) {
    std::optional<MaskedTopic> masked;
    try {
      masked = mask_description(topic, cfg.mask);
    } catch (const PreconditionError& e) {
      report.mask_error = e.what();
    }
    if (masked) tricky_set(engine, topic, *masked, cfg, out, report);
  }
  report.tricky_docs = out.docs.size() - report.relevant_docs;
  out.report = std::move(report);
}

void random_task(Engine& engine, std::size_t first, std::size_t last,
                 TaskOutput& out) {
  const std::string base = engine.plan().random_prompt();
  for (std::size_t n = first; n <= last; ++n) {
    const auto ordinal = static_cast<std::uint32_t>(n);
    GeneratedDoc s;
    s.doc_id = make_doc_id(std::nullopt, Category::kRandom, ordinal);
    out.docs.push_back(engine.document(
        {std::string(kRandomTopic), Phase::kRandomDoc, ordinal},
        Category::kRandom, PromptKind::kRandomDoc,
        salted(base, engine.salt(), ordinal), s, out.ledger));
  }
}

}  // namespace

std::string run_fingerprint(const std::vector<Topic>& topics,
                            const ForgeConfig& cfg, const Provider& provider) {
  nlohmann::ordered_json j;
  j["provider"] = provider.name();
  j["subtopics_requested"] = cfg.subtopics_requested;
  j["docs_per_subtopic"] = cfg.docs_per_subtopic;
  j["variants_per_topic"] = cfg.variants_per_topic;
  j["docs_per_variant"] = cfg.docs_per_variant;
  j["random_docs_total"] = cfg.random_docs_total;
  j["document_type"] = cfg.document_type;
  j["seed"] = cfg.seed;
  j["max_output_tokens"] = cfg.max_output_tokens;
  j["temperature"] = cfg.temperature;
  j["mask_terms"] = cfg.mask.max_terms;
  auto& ts = j["topics"];
  ts = nlohmann::ordered_json::array();
  for (const auto& t : topics) ts.push_back({t.id, t.description});
  return fmt::format("{:016x}", fnv1a64(j.dump()));
}

ForgeResult run_forge(const std::vector<Topic>& topics, const ForgeConfig& cfg,
                      const Provider& provider, const ForgeOptions& options) {
  validate_config(cfg);
  std::optional<Journal> journal;
  if (!options.journal_path.empty()) {
    journal.emplace(Journal::open(options.journal_path,
                                  run_fingerprint(topics, cfg, provider)));
  }
  Engine engine(cfg, provider, journal ? &*journal : nullptr,
                options.max_new_units, options.clock);

  struct Task {
    const Topic* topic = nullptr;
    std::size_t first = 0, last = 0;
  };
  std::vector<Task> tasks;
  for (const auto& t : topics) tasks.push_back({&t, 0, 0});
  for (std::size_t n = 1; n <= cfg.random_docs_total; n += kRandomChunk) {
    tasks.push_back({nullptr, n, std::min(n + kRandomChunk - 1, cfg.random_docs_total)});
  }

  std::vector<TaskOutput> outputs(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<bool> interrupted{false};
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        if (tasks[i].topic) {
          topic_task(engine, *tasks[i].topic, cfg, outputs[i]);
        } else {
          random_task(engine, tasks[i].first, tasks[i].last, outputs[i]);
        }
      } catch (const Interrupted&) {
        interrupted.store(true);
      } catch (...) {
        errors[i] = std::current_exception();
        engine.stop();
      }
    }
  };
  const std::size_t n_threads = std::min(cfg.concurrency, std::max<std::size_t>(tasks.size(), 1));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ForgeResult result;
  result.new_units = engine.new_units();
  result.reused_units = engine.reused_units();
  if (interrupted.load()) return result;

  for (auto& out : outputs) {
    result.ledger.merge(out.ledger);
    if (out.report) result.topics.push_back(std::move(*out.report));
    for (auto& d : out.docs) result.corpus.push_back(std::move(d));
  }
  validate_corpus(result.corpus);
  result.qrels = assemble_qrels(result.corpus);
  result.complete = true;
  return result;
}

namespace {

template <class Fn>
auto run_standalone(const ForgeConfig& cfg, const Provider& provider,
                    UsageLedger* ledger, Fn&& fn) {
  validate_config(cfg);
  Engine engine(cfg, provider, nullptr, std::nullopt, {});
  TaskOutput out;
  try {
    fn(engine, out);
  } catch (const Interrupted&) {
    throw Error("generation interrupted");
  }
  if (ledger) ledger->merge(out.ledger);
  return out;
}

}  // namespace

std::vector<GeneratedDoc> forge_topic(const Topic& topic, const ForgeConfig& cfg,
                                      const Provider& provider,
                                      UsageLedger* ledger) {
  TopicReport report;
  bool ok = true;
  auto out = run_standalone(cfg, provider, ledger, [&](Engine& e, TaskOutput& o) {
    ok = relevant_set(e, topic, cfg, o, report);
  });
  if (!ok) throw Error("topic " + topic.id + ": " + report.failure);
  return std::move(out.docs);
}

std::vector<GeneratedDoc> forge_tricky(const Topic& topic,
                                       const MaskedTopic& masked,
                                       const ForgeConfig& cfg,
                                       const Provider& provider,
                                       UsageLedger* ledger,
                                       std::size_t* shortfall) {
  if (masked.source_topic_id != topic.id) {
    throw PreconditionError("masked description belongs to topic " +
                            masked.source_topic_id + ", not " + topic.id);
  }
  TopicReport report;
  auto out = run_standalone(cfg, provider, ledger, [&](Engine& e, TaskOutput& o) {
    tricky_set(e, topic, masked, cfg, o, report);
  });
  if (shortfall) {
    *shortfall = cfg.docs_per_variant == 0 ? 0 : report.variant_shortfall;
  }
  return std::move(out.docs);
}

std::vector<GeneratedDoc> forge_random(std::size_t count, const ForgeConfig& cfg,
                                       const Provider& provider,
                                       UsageLedger* ledger) {
  auto out = run_standalone(cfg, provider, ledger, [&](Engine& e, TaskOutput& o) {
    if (count > 0) random_task(e, 1, count, o);
  });
  return std::move(out.docs);
}

PipelinePosition checkpoint_resume(const std::string& journal_path,
                                   const std::vector<Topic>& topics,
                                   const ForgeConfig& cfg) {
  PipelinePosition pos;
  std::optional<Journal> journal;
  if (std::filesystem::exists(journal_path)) {
    journal.emplace(Journal::read(journal_path));
    pos.journaled_units = journal->size();
  }
  const auto have = [&](const UnitKey& k) -> const JournalRecord* {
    return journal ? journal->find(k) : nullptr;
  };
  const auto stop_at = [&](std::size_t topic_index, UnitKey key) {
    pos.topic_index = topic_index;
    pos.next = std::move(key);
    return pos;
  };

  for (std::size_t i = 0; i < topics.size(); ++i) {
    const auto& id = topics[i].id;
    if (!have({id, Phase::kInit, 1})) return stop_at(i, {id, Phase::kInit, 1});
    if (cfg.subtopics_requested > 0) {
      const auto* list = have({id, Phase::kSubtopics, 0});
      if (!list) return stop_at(i, {id, Phase::kSubtopics, 0});
      if (!list->failure.empty()) continue;
      const auto n = static_cast<std::uint32_t>(list->items.size() * cfg.docs_per_subtopic);
      for (std::uint32_t o = 1; o <= n; ++o) {
        if (!have({id, Phase::kSubtopicDoc, o})) {
          return stop_at(i, {id, Phase::kSubtopicDoc, o});
        }
      }
    }
    if (cfg.variants_per_topic == 0 || cfg.docs_per_variant == 0) continue;
    try {
      (void)mask_description(topics[i], cfg.mask);
    } catch (const PreconditionError&) {
      continue;
    }
    const auto* list = have({id, Phase::kVariants, 0});
    if (!list) return stop_at(i, {id, Phase::kVariants, 0});
    const auto n = static_cast<std::uint32_t>(list->items.size() * cfg.docs_per_variant);
    for (std::uint32_t o = 1; o <= n; ++o) {
      if (!have({id, Phase::kTrickyDoc, o})) {
        return stop_at(i, {id, Phase::kTrickyDoc, o});
      }
    }
  }
  for (std::uint32_t o = 1; o <= cfg.random_docs_total; ++o) {
    if (!have({std::string(kRandomTopic), Phase::kRandomDoc, o})) {
      return stop_at(topics.size(), {std::string(kRandomTopic), Phase::kRandomDoc, o});
    }
  }
  pos.complete = true;
  pos.topic_index = topics.size();
  return pos;
}

}  // namespace synthcoll::forge
