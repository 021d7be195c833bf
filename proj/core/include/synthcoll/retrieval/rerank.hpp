#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "synthcoll/genclient/provider.hpp"
#include "synthcoll/retrieval/run.hpp"

namespace synthcoll::retrieval {

class RerankClient {
 public:
  virtual ~RerankClient() = default;
  /// One score per passage, higher is better.
  virtual std::vector<double> score(const std::string& query,
                                    const std::vector<std::string>& passages) const = 0;
  virtual std::string_view name() const = 0;
};

/// Offline scorer: sum over query stems of ln(1 + tf) in the passage,
/// divided by sqrt(1 + passage length in stems).
class MockReranker final : public RerankClient {
 public:
  std::vector<double> score(const std::string& query,
                            const std::vector<std::string>& passages) const override;
  std::string_view name() const override { return "mock"; }
};

/// Wraps a callable; handy for tests and custom scorers.
class FunctionReranker final : public RerankClient {
 public:
  using Fn = std::function<std::vector<double>(const std::string&,
                                               const std::vector<std::string>&)>;
  explicit FunctionReranker(Fn fn) : fn_(std::move(fn)) {}
  std::vector<double> score(const std::string& query,
                            const std::vector<std::string>& passages) const override {
    return fn_(query, passages);
  }
  std::string_view name() const override { return "function"; }

 private:
  Fn fn_;
};

/// POST {"query":..., "passages":[...]} -> {"scores":[...]}.
struct HttpRerankerOptions {
  std::string url;
  std::string api_key;
  std::chrono::seconds timeout{120};
  genclient::RetryPolicy retry;
};

class HttpReranker final : public RerankClient {
 public:
  explicit HttpReranker(HttpRerankerOptions options);
  std::vector<double> score(const std::string& query,
                            const std::vector<std::string>& passages) const override;
  std::string_view name() const override { return "http"; }

 private:
  HttpRerankerOptions options_;
};

using TextLookup = std::function<const std::string*(const std::string& doc_id)>;

/// Rescores each topic's top `depth` entries and reorders them by service
/// score (ties by doc_id). Entries below depth follow in their original
/// order, shifted so the best of them scores 1 below the reranked minimum.
/// Throws Error when the service returns the wrong number of scores, a
/// topic has no query, or a doc has no text.
Run rerank(const Run& run, const std::map<std::string, std::string, std::less<>>& queries,
           const TextLookup& doc_text, const RerankClient& client,
           std::size_t depth = 100, const std::string& tag = "rerank");

}  // namespace synthcoll::retrieval
