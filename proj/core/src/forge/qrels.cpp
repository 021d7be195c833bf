#include "synthcoll/forge/qrels.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include "synthcoll/error.hpp"

namespace synthcoll {

void Qrels::add(QrelsEntry entry) {
  auto& docs = index_[entry.topic_id];
  if (docs.find(entry.doc_id) != docs.end()) {
    throw InvariantError("duplicate judgment for topic " + entry.topic_id +
                         ", doc " + entry.doc_id);
  }
  docs.emplace(entry.doc_id, entries_.size());
  entries_.push_back(std::move(entry));
}

int Qrels::judgment(std::string_view topic_id, std::string_view doc_id) const {
  const auto t = index_.find(topic_id);
  if (t == index_.end()) return -1;
  const auto d = t->second.find(doc_id);
  return d == t->second.end() ? -1 : entries_[d->second].relevance;
}

std::size_t Qrels::relevant_count(std::string_view topic_id) const {
  const auto t = index_.find(topic_id);
  if (t == index_.end()) return 0;
  std::size_t n = 0;
  for (const auto& [doc, i] : t->second) n += entries_[i].relevance > 0;
  return n;
}

std::vector<std::string> Qrels::topics() const {
  std::vector<std::string> out;
  out.reserve(index_.size());
  for (const auto& [t, docs] : index_) out.push_back(t);
  return out;
}

bool Qrels::has_topic(std::string_view topic_id) const {
  return index_.find(topic_id) != index_.end();
}

std::vector<QrelsEntry> Qrels::topic_entries(std::string_view topic_id) const {
  std::vector<QrelsEntry> out;
  for (const auto& e : entries_) {
    if (e.topic_id == topic_id) out.push_back(e);
  }
  return out;
}

std::string write_qrels(const Qrels& qrels) {
  std::string out;
  for (const auto& e : qrels.entries()) {
    out += e.topic_id;
    out += " 0 ";
    out += e.doc_id;
    out += ' ';
    out += std::to_string(e.relevance);
    out += '\n';
  }
  return out;
}

Qrels read_qrels(std::string_view text) {
  Qrels out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::istringstream line(std::string(text.substr(pos, eol - pos)));
    pos = eol + 1;
    ++line_no;
    std::string topic, iteration, doc, rel, extra;
    if (!(line >> topic)) continue;
    if (!(line >> iteration >> doc >> rel) || (line >> extra)) {
      throw ParseError("qrels line " + std::to_string(line_no) +
                           ": expected 4 columns",
                       line_no);
    }
    int relevance = 0;
    auto [ptr, ec] =
        std::from_chars(rel.data(), rel.data() + rel.size(), relevance);
    if (ec != std::errc{} || ptr != rel.data() + rel.size()) {
      throw ParseError("qrels line " + std::to_string(line_no) +
                           ": relevance '" + rel + "' is not an integer",
                       line_no);
    }
    try {
      out.add({std::move(topic), std::move(doc), relevance});
    } catch (const InvariantError& e) {
      throw ParseError("qrels line " + std::to_string(line_no) + ": " +
                           e.what(),
                       line_no);
    }
  }
  return out;
}

Qrels load_qrels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  const std::string text{std::istreambuf_iterator<char>(in), {}};
  return read_qrels(text);
}

void save_qrels(const Qrels& qrels, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << write_qrels(qrels);
}

Qrels assemble_qrels(const forge::Corpus& corpus) {
  using forge::Category;
  Qrels out;
  for (const auto& d : corpus) {
    if (d.category == Category::kRandom) {
      if (d.topic_id) {
        throw InvariantError("RANDOM document '" + d.doc_id +
                             "' carries topic_id " + *d.topic_id);
      }
      continue;
    }
    if (!d.topic_id) {
      throw InvariantError("document '" + d.doc_id + "' has no topic_id");
    }
    out.add({*d.topic_id, d.doc_id, forge::is_relevant_category(d.category)});
  }
  return out;
}

}  // namespace synthcoll
