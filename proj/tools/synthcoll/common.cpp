#include "common.hpp"

#include <algorithm>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <nlohmann/json.hpp>

#include "synthcoll/digest.hpp"
#include "synthcoll/error.hpp"
#include "synthcoll/parallel.hpp"

namespace synthcoll::cli {

std::string utc_timestamp() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Manifest::Manifest(std::string command)
    : command_(std::move(command)), started_at_(utc_timestamp()) {}

void Manifest::add_input(const std::string& path) { inputs_.emplace_back(path, sha256_file(path)); }

void Manifest::add_output(const std::string& path) { outputs_.emplace_back(path, std::string{}); }

void Manifest::write() const {
  nlohmann::ordered_json j;
  j["command"] = command_;
  j["tool_version"] = SYNTHCOLL_VERSION;
  j["argv"] = argv_;
  j["config_digest"] = config_digest_;
  j["seed"] = seed_;
  auto& in = j["inputs"];
  in = nlohmann::ordered_json::array();
  for (const auto& [p, d] : inputs_) in.push_back({{"path", p}, {"sha256", d}});
  auto& out = j["outputs"];
  out = nlohmann::ordered_json::array();
  for (const auto& [p, d] : outputs_) {
    out.push_back({{"path", p}, {"sha256", std::filesystem::exists(p) ? sha256_file(p) : ""}});
  }
  if (!notes_.empty()) j["notes"] = notes_;
  j["started_at"] = started_at_;
  j["finished_at"] = utc_timestamp();
  std::string path = path_;
  if (path.empty()) path = command_ + ".manifest.json";
  write_text(path, j.dump(2) + "\n");
}

std::size_t Common::effective_jobs() const { return jobs == 0 ? default_jobs() : jobs; }

const Config& Common::config() const {
  if (!config_) config_ = config_path.empty() ? Config{} : Config::load(config_path);
  return *config_;
}

std::string Common::config_digest() const { return sha256_hex(config().canonical()); }

void add_common(CLI::App& sub, Common& common) {
  sub.add_option("--config", common.config_path, "INI configuration file")->check(CLI::ExistingFile);
  sub.add_option("--manifest", common.manifest_path, "Where to write the run manifest");
  sub.add_option("--jobs", common.jobs, "Worker threads (default: logical CPUs)");
}

std::string manifest_location(const Common& common, const std::string& primary_output,
                              const std::string& command) {
  if (!common.manifest_path.empty()) return common.manifest_path;
  if (!primary_output.empty() && primary_output != "-") return primary_output + ".manifest.json";
  return command + ".manifest.json";
}

std::unique_ptr<genclient::Provider> make_provider(const std::string& kind_flag, const Config& cfg,
                                                   const std::string& seed) {
  const std::string kind = kind_flag.empty() ? cfg.get_string("provider.type", "mock") : kind_flag;
  if (kind == "mock") {
    genclient::MockOptions o;
    o.seed_salt = seed;
    o.body_words = static_cast<std::size_t>(cfg.get_int("provider.mock_body_words", 180));
    o.model_id = cfg.get_string("provider.model", "mock-1");
    return std::make_unique<genclient::MockProvider>(o);
  }
  if (kind == "http") {
    genclient::HttpProviderOptions o;
    o.base_url = cfg.get_string("provider.base_url", "");
    o.model = cfg.get_string("provider.model", "");
    o.api_key = cfg.get_string("provider.api_key", Config::process_env("GENTREC_API_KEY").value_or(""));
    o.timeout = std::chrono::seconds(cfg.get_int("provider.timeout_s", 120));
    o.retry.max_attempts = static_cast<int>(cfg.get_int("provider.max_attempts", 5));
    o.retry.initial_backoff = std::chrono::milliseconds(cfg.get_int("provider.initial_backoff_ms", 1000));
    o.retry.multiplier = cfg.get_double("provider.backoff_multiplier", 2.0);
    if (o.base_url.empty() || o.model.empty()) {
      throw UsageError("the http provider needs provider.base_url and provider.model in --config");
    }
    return std::make_unique<genclient::HttpProvider>(o);
  }
  throw UsageError("unknown provider '" + kind + "' (expected mock or http)");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_text(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write to '" + path + "' failed");
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
  } else {
    write_text(path, text);
  }
}

std::vector<Topic> load_topic_file(const std::string& path, const std::string& format) {
  std::string f = format;
  if (f.empty() || f == "auto") {
    const auto text = read_text(path);
    const auto p = text.find_first_not_of(" \t\r\n");
    f = (p != std::string::npos && text[p] == '{') ? "jsonl" : "trec";
    return parse_topics(text, parse_topic_format(f));
  }
  return load_topics(path, parse_topic_format(f));
}

forge::Corpus load_corpus_file(const std::string& path) { return forge::load_corpus_any(path); }

namespace {

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

std::optional<std::string> nearest_option(const CLI::App& app, const std::string& flag) {
  std::string bare = flag.substr(0, flag.find('='));
  std::optional<std::string> best;
  std::size_t best_d = std::string::npos;
  for (const auto* opt : app.get_options()) {
    for (const auto& name : opt->get_lnames()) {
      const std::string cand = "--" + name;
      const auto d = edit_distance(bare, cand);
      if (d < best_d) {
        best_d = d;
        best = cand;
      }
    }
  }
  if (!best || best_d > std::max<std::size_t>(3, bare.size() / 3)) return std::nullopt;
  return best;
}

}  // namespace synthcoll::cli
