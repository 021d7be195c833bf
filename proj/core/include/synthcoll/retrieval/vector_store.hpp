#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "synthcoll/retrieval/run.hpp"

namespace synthcoll::retrieval {

/// Dense vectors keyed by doc_id. On disk: "VEC1", u32 dim, u32 count, then
/// count*dim little-endian f32 row-major; doc ids go to "<path>.ids", one
/// per line in row order.
class VectorStore {
 public:
  explicit VectorStore(std::uint32_t dim = 0) : dim_(dim) {}

  /// Throws PreconditionError on a dimensionality mismatch.
  void add(std::string doc_id, std::span<const float> vec);

  std::uint32_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  const std::string& id(std::size_t i) const { return ids_.at(i); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }

  void save(const std::string& path) const;
  static VectorStore load(const std::string& path);

  friend bool operator==(const VectorStore&, const VectorStore&) = default;

 private:
  std::uint32_t dim_;
  std::vector<std::string> ids_;
  std::vector<float> data_;
};

/// Exact inner-product search over every row; ties by ascending doc_id.
std::vector<RunEntry> dense_search(const VectorStore& store,
                                   std::span<const float> query, std::size_t k,
                                   const std::string& topic_id = {},
                                   const std::string& tag = "dense");

}  // namespace synthcoll::retrieval
