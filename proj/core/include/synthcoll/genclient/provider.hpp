#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "synthcoll/genclient/ledger.hpp"

namespace synthcoll::genclient {

/// Every request is a single-turn conversation; no history is ever sent.
enum class Session { kFresh };

struct GenRequest {
  std::string prompt;
  std::uint32_t max_output_tokens = 1024;
  double temperature = 1.0;
  static constexpr Session session = Session::kFresh;
};

struct GenResponse {
  std::string text;
  Usage usage;
  std::string model_id;
  bool usage_estimated = false;  // provider omitted token counts
};

/// ceil(code points / 4): the fallback when a provider reports no usage.
std::uint64_t estimate_tokens(std::string_view text) noexcept;

/// Text-generation backend. Implementations must be safe to call from
/// several threads at once.
class Provider {
 public:
  virtual ~Provider() = default;

  /// Validates the request (non-empty prompt, positive token budget) and
  /// forwards it to the backend.
  GenResponse generate(const GenRequest& request) const;

  virtual std::string_view name() const = 0;

  /// True when identical requests always return identical text. The forge
  /// salts otherwise-identical prompts for such providers.
  virtual bool deterministic() const noexcept { return false; }

 protected:
  virtual GenResponse do_generate(const GenRequest& request) const = 0;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{1000};
  double multiplier = 2.0;
};

/// Offline generator: a hash of (salt, prompt, max_output_tokens) seeds a
/// word sampler over the bundled vocabulary. Recognises the subtopic and
/// altered-topic prompts and answers them with numbered lists; every other
/// prompt gets a "Title: ..." line and a multi-paragraph body mixing words
/// from the prompt with vocabulary words.
struct MockOptions {
  std::string seed_salt = "0";
  std::size_t body_words = 180;
  std::string model_id = "mock-1";
};

class MockProvider final : public Provider {
 public:
  explicit MockProvider(MockOptions options = {});

  std::string_view name() const override { return "mock"; }
  bool deterministic() const noexcept override { return true; }
  const MockOptions& options() const noexcept { return options_; }

 protected:
  GenResponse do_generate(const GenRequest& request) const override;

 private:
  MockOptions options_;
};

/// Chat-completions compatible JSON endpoint: POST {base_url}/chat/completions
/// with a single user message.
struct HttpProviderOptions {
  std::string base_url;  // e.g. https://api.openai.com/v1
  std::string model;
  std::string api_key;   // sent as "Authorization: Bearer ..." when set
  std::chrono::seconds timeout{120};
  RetryPolicy retry;
};

class HttpProvider final : public Provider {
 public:
  explicit HttpProvider(HttpProviderOptions options);

  std::string_view name() const override { return "http"; }
  const HttpProviderOptions& options() const noexcept { return options_; }

 protected:
  GenResponse do_generate(const GenRequest& request) const override;

 private:
  HttpProviderOptions options_;
};

}  // namespace synthcoll::genclient
