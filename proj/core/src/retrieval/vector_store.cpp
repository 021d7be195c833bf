#include "synthcoll/retrieval/vector_store.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "synthcoll/error.hpp"

namespace synthcoll::retrieval {

namespace {

constexpr char kMagic[4] = {'V', 'E', 'C', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
                     static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void VectorStore::add(std::string doc_id, std::span<const float> vec) {
  if (ids_.empty() && dim_ == 0) dim_ = static_cast<std::uint32_t>(vec.size());
  if (vec.size() != dim_) {
    throw PreconditionError(fmt::format(
        "vector for {} has dimension {}, store has dimension {}", doc_id, vec.size(), dim_));
  }
  ids_.push_back(std::move(doc_id));
  data_.insert(data_.end(), vec.begin(), vec.end());
}

void VectorStore::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(kMagic, 4);
  put_u32(out, dim_);
  put_u32(out, static_cast<std::uint32_t>(ids_.size()));
  for (const float f : data_) put_u32(out, std::bit_cast<std::uint32_t>(f));
  std::ofstream ids(path + ".ids", std::ios::binary | std::ios::trunc);
  if (!ids) throw Error("cannot write '" + path + ".ids'");
  for (const auto& id : ids_) ids << id << '\n';
  if (!out || !ids) throw Error("write to '" + path + "' failed");
}

VectorStore VectorStore::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open vector store '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error("'" + path + "' is not a VEC1 vector store");
  }
  const auto dim = get_u32(in);
  const auto count = get_u32(in);
  if (!in) throw Error("vector store '" + path + "' is truncated");
  VectorStore store(dim);
  store.data_.resize(static_cast<std::size_t>(dim) * count);
  for (auto& f : store.data_) f = std::bit_cast<float>(get_u32(in));
  if (!in) throw Error("vector store '" + path + "' is truncated");
  std::ifstream ids(path + ".ids", std::ios::binary);
  if (!ids) throw Error("missing doc id sidecar '" + path + ".ids'");
  std::string line;
  while (std::getline(ids, line)) {
    if (!line.empty()) store.ids_.push_back(line);
  }
  if (store.ids_.size() != count) {
    throw Error(fmt::format("vector store '{}' holds {} vectors but {} ids", path,
                            count, store.ids_.size()));
  }
  return store;
}

std::vector<RunEntry> dense_search(const VectorStore& store,
                                   std::span<const float> query, std::size_t k,
                                   const std::string& topic_id,
                                   const std::string& tag) {
  if (store.size() > 0 && query.size() != store.dim()) {
    throw PreconditionError(fmt::format(
        "query has dimension {}, store has dimension {}", query.size(), store.dim()));
  }
  std::vector<double> scores(store.size());
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto row = store.row(i);
    double s = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      s += static_cast<double>(row[j]) * static_cast<double>(query[j]);
    }
    scores[i] = s;
  }
  std::vector<std::size_t> order(store.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto better = [&](std::size_t a, std::size_t b) {
    return scores[a] != scores[b] ? scores[a] > scores[b] : store.id(a) < store.id(b);
  };
  const std::size_t depth = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(depth),
                    order.end(), better);
  std::vector<RunEntry> out;
  out.reserve(depth);
  for (std::size_t i = 0; i < depth; ++i) {
    out.push_back({topic_id, store.id(order[i]), static_cast<std::uint32_t>(i + 1),
                   scores[order[i]], tag});
  }
  return out;
}

}  // namespace synthcoll::retrieval
