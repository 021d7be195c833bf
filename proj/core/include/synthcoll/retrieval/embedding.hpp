#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "synthcoll/forge/document.hpp"
#include "synthcoll/genclient/provider.hpp"
#include "synthcoll/retrieval/vector_store.hpp"

namespace synthcoll::retrieval {

class EmbeddingClient {
 public:
  virtual ~EmbeddingClient() = default;
  /// One vector per text, all of one dimensionality.
  virtual std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) const = 0;
  virtual std::string_view name() const = 0;
};

/// Bag-of-stems embedder: every stem maps to a hash-seeded pseudo-random
/// direction; a text is the L2-normalised sum over its stems. Texts
/// sharing vocabulary get high inner products. Empty texts embed to zero.
class MockEmbedder final : public EmbeddingClient {
 public:
  explicit MockEmbedder(std::uint32_t dim = 64, std::string salt = "0");
  std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) const override;
  std::string_view name() const override { return "mock"; }
  std::uint32_t dim() const noexcept { return dim_; }

 private:
  std::uint32_t dim_;
  std::string salt_;
};

/// POST {"texts":[...]} -> {"vectors":[[...], ...]}.
struct HttpEmbedderOptions {
  std::string url;
  std::string api_key;
  std::chrono::seconds timeout{120};
  genclient::RetryPolicy retry;
};

class HttpEmbedder final : public EmbeddingClient {
 public:
  explicit HttpEmbedder(HttpEmbedderOptions options);
  std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) const override;
  std::string_view name() const override { return "http"; }

 private:
  HttpEmbedderOptions options_;
};

/// Embeds doc full texts in corpus order, `batch_size` per request. With a
/// progress path, finished batches are appended there and skipped on rerun,
/// so an endpoint failure loses at most one batch. Failures surface as
/// CheckpointError.
VectorStore embed_corpus(const forge::Corpus& corpus, const EmbeddingClient& client,
                         std::size_t batch_size = 32,
                         const std::string& progress_path = {});

/// Embeds one query; throws Error when the client returns no vector.
std::vector<float> embed_query(const EmbeddingClient& client, const std::string& query);

}  // namespace synthcoll::retrieval
