#include "synthcoll/retrieval/embedding.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

#include <fmt/format.h>

#include "net/http_json.hpp"
#include "synthcoll/error.hpp"
#include "synthcoll/random.hpp"
#include "synthcoll/text/analyzer.hpp"

namespace synthcoll::retrieval {

MockEmbedder::MockEmbedder(std::uint32_t dim, std::string salt)
    : dim_(dim), salt_(std::move(salt)) {
  if (dim_ == 0) throw PreconditionError("embedding dimension must be >= 1");
}

std::vector<std::vector<float>> MockEmbedder::embed(
    const std::vector<std::string>& texts) const {
  static const text::Analyzer analyzer = text::Analyzer::english();
  const std::uint64_t base = fnv1a64(salt_);
  std::vector<std::vector<float>> out;
  out.reserve(texts.size());
  std::vector<double> acc(dim_);
  for (const auto& t : texts) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (const auto& stem : analyzer.analyze(t)) {
      SplitMix64 rng(fnv1a64(stem, base));
      for (auto& a : acc) a += rng.unit() * 2.0 - 1.0;
    }
    double norm = 0;
    for (const double a : acc) norm += a * a;
    norm = std::sqrt(norm);
    std::vector<float> v(dim_, 0.0f);
    if (norm > 0) {
      for (std::size_t i = 0; i < dim_; ++i) v[i] = static_cast<float>(acc[i] / norm);
    }
    out.push_back(std::move(v));
  }
  return out;
}

HttpEmbedder::HttpEmbedder(HttpEmbedderOptions options) : options_(std::move(options)) {
  if (options_.url.empty()) throw PreconditionError("embedding endpoint URL is empty");
}

std::vector<std::vector<float>> HttpEmbedder::embed(
    const std::vector<std::string>& texts) const {
  if (texts.empty()) return {};
  const net::HttpJsonClient client(options_.url, options_.api_key, options_.timeout,
                                   options_.retry);
  const auto reply = client.post({{"texts", texts}});
  if (!reply.contains("vectors") || !reply.at("vectors").is_array()) {
    throw ProviderError(200, "embedding reply without a 'vectors' array");
  }
  auto vectors = reply.at("vectors").get<std::vector<std::vector<float>>>();
  if (vectors.size() != texts.size()) {
    throw ProviderError(200, fmt::format("embedding service returned {} vectors for {} texts",
                                         vectors.size(), texts.size()));
  }
  for (const auto& v : vectors) {
    if (v.size() != vectors.front().size() || v.empty()) {
      throw ProviderError(200, "embedding service returned vectors of mixed dimension");
    }
  }
  return vectors;
}

namespace {

std::vector<std::vector<float>> embed_batch(const EmbeddingClient& client,
                                            const std::vector<std::string>& texts,
                                            std::size_t first) {
  try {
    return client.embed(texts);
  } catch (const ProviderError& e) {
    throw CheckpointError(fmt::format("embedding batch starting at doc {}: {}", first, e.what()));
  } catch (const TimeoutError& e) {
    throw CheckpointError(fmt::format("embedding batch starting at doc {}: {}", first, e.what()));
  }
}

}  // namespace

VectorStore embed_corpus(const forge::Corpus& corpus, const EmbeddingClient& client,
                         std::size_t batch_size, const std::string& progress_path) {
  if (batch_size == 0) throw PreconditionError("batch size must be >= 1");
  std::vector<std::vector<float>> done;
  if (!progress_path.empty() && std::filesystem::exists(progress_path)) {
    std::ifstream in(progress_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      try {
        const auto j = nlohmann::json::parse(line);
        if (j.at("first").get<std::size_t>() != done.size()) throw Error("batch out of order");
        for (auto& v : j.at("vectors").get<std::vector<std::vector<float>>>()) {
          done.push_back(std::move(v));
        }
      } catch (const std::exception& e) {
        throw ParseError(fmt::format("embedding progress line {}: {}", line_no, e.what()),
                         line_no);
      }
    }
    if (done.size() > corpus.size()) throw Error("embedding progress file is for a larger corpus");
  }
  std::ofstream progress;
  if (!progress_path.empty()) progress.open(progress_path, std::ios::app);
  for (std::size_t first = done.size(); first < corpus.size(); first += batch_size) {
    std::vector<std::string> texts;
    const std::size_t last = std::min(corpus.size(), first + batch_size);
    for (std::size_t i = first; i < last; ++i) texts.push_back(corpus[i].full_text());
    auto vectors = embed_batch(client, texts, first);
    if (vectors.size() != texts.size()) {
      throw Error(fmt::format("embedder returned {} vectors for {} texts", vectors.size(),
                              texts.size()));
    }
    if (progress.is_open()) {
      progress << nlohmann::json{{"first", first}, {"vectors", vectors}}.dump() << '\n';
      progress.flush();
    }
    for (auto& v : vectors) done.push_back(std::move(v));
  }
  VectorStore store(done.empty() ? 0 : static_cast<std::uint32_t>(done.front().size()));
  for (std::size_t i = 0; i < done.size(); ++i) store.add(corpus[i].doc_id, done[i]);
  return store;
}

std::vector<float> embed_query(const EmbeddingClient& client, const std::string& query) {
  auto v = embed_batch(client, {query}, 0);
  if (v.size() != 1) throw Error("embedder returned no vector for the query");
  return std::move(v.front());
}

}  // namespace synthcoll::retrieval
