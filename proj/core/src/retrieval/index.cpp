#include "synthcoll/retrieval/index.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "synthcoll/error.hpp"

namespace synthcoll::retrieval {

namespace {

constexpr char kMagic[8] = {'S', 'C', 'I', 'D', 'X', '0', '0', '1'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void u32(std::uint32_t v) {
    const char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
                       static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
    out_.write(b, 4);
  }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, const std::string& path) : in_(in), path_(path) {}
  std::uint32_t u32() {
    unsigned char b[4];
    in_.read(reinterpret_cast<char*>(b), 4);
    check();
    return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }
  std::string str() {
    const auto n = u32();
    if (n > (1u << 28)) throw Error("index '" + path_ + "' is corrupt");
    std::string s(n, '\0');
    in_.read(s.data(), n);
    check();
    return s;
  }

 private:
  void check() {
    if (!in_) throw Error("index '" + path_ + "' is truncated");
  }
  std::istream& in_;
  const std::string& path_;
};

}  // namespace

Index Index::build(std::vector<IndexDoc> docs, const text::Analyzer& analyzer) {
  if (docs.empty()) throw Error("empty corpus");
  std::sort(docs.begin(), docs.end(),
            [](const IndexDoc& a, const IndexDoc& b) { return a.doc_id < b.doc_id; });
  for (std::size_t i = 1; i < docs.size(); ++i) {
    if (docs[i].doc_id == docs[i - 1].doc_id) {
      throw InvariantError("duplicate doc_id '" + docs[i].doc_id + "'");
    }
  }
  Index idx;
  idx.analyzer_ = analyzer;
  idx.doc_ids_.reserve(docs.size());
  idx.doc_lengths_.reserve(docs.size());
  double total = 0;
  std::vector<std::string> terms;
  for (std::size_t ord = 0; ord < docs.size(); ++ord) {
    terms = analyzer.analyze(docs[ord].text);
    idx.doc_ids_.push_back(std::move(docs[ord].doc_id));
    idx.doc_lengths_.push_back(static_cast<std::uint32_t>(terms.size()));
    total += static_cast<double>(terms.size());
    std::sort(terms.begin(), terms.end());
    for (std::size_t i = 0; i < terms.size();) {
      std::size_t j = i;
      while (j < terms.size() && terms[j] == terms[i]) ++j;
      auto it = idx.postings_.find(terms[i]);
      if (it == idx.postings_.end()) it = idx.postings_.emplace(terms[i], std::vector<Posting>{}).first;
      it->second.push_back({static_cast<std::uint32_t>(ord), static_cast<std::uint32_t>(j - i)});
      i = j;
    }
  }
  idx.avgdl_ = total / static_cast<double>(docs.size());
  return idx;
}

Index Index::build(const forge::Corpus& corpus, const text::Analyzer& analyzer) {
  std::vector<IndexDoc> docs;
  docs.reserve(corpus.size());
  for (const auto& d : corpus) docs.push_back({d.doc_id, d.full_text()});
  return build(std::move(docs), analyzer);
}

const std::vector<Posting>& Index::postings(std::string_view term) const {
  static const std::vector<Posting> kEmpty;
  const auto it = postings_.find(term);
  return it == postings_.end() ? kEmpty : it->second;
}

void Index::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(kMagic, sizeof kMagic);
  Writer w(out);
  const auto& opt = analyzer_.options();
  w.u32(opt.lowercase ? 1 : 0);
  w.u32(opt.stemmer == text::Stemmer::kPorter ? 1 : 0);
  std::vector<std::string> stop(opt.stopwords.begin(), opt.stopwords.end());
  std::sort(stop.begin(), stop.end());
  w.u32(static_cast<std::uint32_t>(stop.size()));
  for (const auto& s : stop) w.str(s);
  w.u32(doc_count());
  for (std::uint32_t i = 0; i < doc_count(); ++i) {
    w.str(doc_ids_[i]);
    w.u32(doc_lengths_[i]);
  }
  w.u32(static_cast<std::uint32_t>(postings_.size()));
  for (const auto& [term, list] : postings_) {
    w.str(term);
    w.u32(static_cast<std::uint32_t>(list.size()));
    for (const auto& p : list) {
      w.u32(p.doc);
      w.u32(p.tf);
    }
  }
  if (!out) throw Error("write to '" + path + "' failed");
}

Index Index::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open index '" + path + "'");
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw Error("'" + path + "' is not a synthcoll index");
  }
  Reader r(in, path);
  text::AnalyzerOptions opt;
  opt.lowercase = r.u32() != 0;
  opt.stemmer = r.u32() != 0 ? text::Stemmer::kPorter : text::Stemmer::kNone;
  const auto n_stop = r.u32();
  for (std::uint32_t i = 0; i < n_stop; ++i) opt.stopwords.insert(r.str());
  Index idx;
  idx.analyzer_ = text::Analyzer(std::move(opt));
  const auto n = r.u32();
  double total = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    idx.doc_ids_.push_back(r.str());
    idx.doc_lengths_.push_back(r.u32());
    total += idx.doc_lengths_.back();
  }
  idx.avgdl_ = n ? total / n : 0;
  const auto n_terms = r.u32();
  for (std::uint32_t t = 0; t < n_terms; ++t) {
    auto term = r.str();
    const auto count = r.u32();
    std::vector<Posting> list;
    list.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      const auto doc = r.u32();
      const auto tf = r.u32();
      if (doc >= n || (!list.empty() && doc <= list.back().doc)) {
        throw Error("index '" + path + "' has invalid postings for '" + term + "'");
      }
      list.push_back({doc, tf});
    }
    idx.postings_.emplace(std::move(term), std::move(list));
  }
  return idx;
}

}  // namespace synthcoll::retrieval
