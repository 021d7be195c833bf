#pragma once

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "synthcoll/config.hpp"
#include "synthcoll/forge/document.hpp"
#include "synthcoll/genclient/provider.hpp"
#include "synthcoll/topics.hpp"

namespace synthcoll::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kRuntime = 2;

/// Raised for bad flag values detected after parsing; maps to exit 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Records what a command read and wrote; saved as JSON next to the outputs.
class Manifest {
 public:
  explicit Manifest(std::string command);

  void set_argv(std::vector<std::string> argv) { argv_ = std::move(argv); }
  void set_config_digest(std::string digest) { config_digest_ = std::move(digest); }
  void set_seed(std::string seed) { seed_ = std::move(seed); }
  void add_input(const std::string& path);
  void add_output(const std::string& path);
  void note(const std::string& key, std::string value) { notes_[key] = std::move(value); }
  /// Default location when the command has no output file of its own.
  void set_path(std::string path) { path_ = std::move(path); }
  const std::string& path() const noexcept { return path_; }

  void write() const;

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::string config_digest_;
  std::string seed_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::pair<std::string, std::string>> outputs_;
  std::map<std::string, std::string> notes_;
  std::string path_;
  std::string started_at_;
};

/// Options shared by every subcommand.
struct Common {
  std::string config_path;
  std::string manifest_path;
  std::size_t jobs = 0;  // 0: logical CPUs

  std::size_t effective_jobs() const;
  /// Loaded config, or an empty one when --config is absent.
  const Config& config() const;
  std::string config_digest() const;

 private:
  mutable std::optional<Config> config_;
};

void add_common(CLI::App& sub, Common& common);

/// --manifest if given, else "<primary output>.manifest.json", else
/// "<command>.manifest.json" for commands writing only to stdout.
std::string manifest_location(const Common& common, const std::string& primary_output,
                              const std::string& command);

/// Provider from --provider / config ([provider] type, base_url, model,
/// api_key, timeout_s, max_attempts, initial_backoff_ms). The API key
/// falls back to $GENTREC_API_KEY.
std::unique_ptr<genclient::Provider> make_provider(const std::string& kind, const Config& cfg,
                                                   const std::string& seed);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);
/// Writes to `path`, or stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text);

std::vector<Topic> load_topic_file(const std::string& path, const std::string& format);
/// JSONL or TREC SGML, by content.
forge::Corpus load_corpus_file(const std::string& path);

std::string utc_timestamp();

/// Runs after CLI11 parsing; returns an exit code.
using Action = std::function<int()>;

struct Registry {
  std::map<CLI::App*, Action> actions;
  std::vector<std::string> argv;
};

void register_forge(CLI::App& app, Registry& reg);
void register_retrieval(CLI::App& app, Registry& reg);
void register_eval(CLI::App& app, Registry& reg);
void register_stats(CLI::App& app, Registry& reg);

/// Closest option name by edit distance, for "did you mean" hints.
std::optional<std::string> nearest_option(const CLI::App& app, const std::string& flag);

}  // namespace synthcoll::cli
