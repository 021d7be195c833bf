#include "synthcoll/retrieval/run.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "synthcoll/error.hpp"

namespace synthcoll {

void rank_entries(std::vector<RunEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const RunEntry& a, const RunEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].rank = static_cast<std::uint32_t>(i + 1);
  }
}

std::string format_run_line(const RunEntry& e) {
  return fmt::format("{} Q0 {} {} {:.6f} {}", e.topic_id, e.doc_id, e.rank,
                     e.score, e.tag);
}

std::string write_run(const Run& run) {
  std::string out;
  for (const auto& e : run) {
    out += format_run_line(e);
    out += '\n';
  }
  return out;
}

void save_run(const Run& run, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << write_run(run);
}

Run read_run(std::string_view text) {
  Run out;
  struct TopicState {
    std::uint32_t last_rank = 0;
    double last_score = 0;
    std::set<std::string, std::less<>> docs;
  };
  std::map<std::string, TopicState, std::less<>> state;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::istringstream line(std::string(text.substr(pos, eol - pos)));
    pos = eol + 1;
    ++line_no;
    const auto fail = [&](const std::string& why) {
      throw ParseError("run line " + std::to_string(line_no) + ": " + why, line_no);
    };
    RunEntry e;
    std::string q0, rank, score, extra;
    if (!(line >> e.topic_id)) continue;
    if (!(line >> q0 >> e.doc_id >> rank >> score >> e.tag) || (line >> extra)) {
      fail("expected 6 columns");
    }
    if (q0 != "Q0") fail("second column must be Q0");
    auto [p, ec] = std::from_chars(rank.data(), rank.data() + rank.size(), e.rank);
    if (ec != std::errc{} || p != rank.data() + rank.size() || e.rank == 0) {
      fail("bad rank '" + rank + "'");
    }
    try {
      std::size_t used = 0;
      e.score = std::stod(score, &used);
      if (used != score.size()) throw std::invalid_argument(score);
    } catch (const std::exception&) {
      fail("bad score '" + score + "'");
    }
    auto& st = state[e.topic_id];
    if (e.rank != st.last_rank + 1) {
      fail(fmt::format("topic {}: rank {} follows rank {}", e.topic_id, e.rank,
                       st.last_rank));
    }
    if (st.last_rank > 0 && e.score > st.last_score) {
      fail(fmt::format("topic {}: score increases at rank {}", e.topic_id, e.rank));
    }
    if (!st.docs.insert(e.doc_id).second) {
      fail(fmt::format("topic {}: duplicate doc {}", e.topic_id, e.doc_id));
    }
    st.last_rank = e.rank;
    st.last_score = e.score;
    out.push_back(std::move(e));
  }
  return out;
}

Run load_run(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  const std::string text{std::istreambuf_iterator<char>(in), {}};
  return read_run(text);
}

RunByTopic group_by_topic(const Run& run) {
  RunByTopic out;
  for (const auto& e : run) out[e.topic_id].push_back(e);
  for (auto& [t, v] : out) {
    std::stable_sort(v.begin(), v.end(), [](const RunEntry& a, const RunEntry& b) {
      return a.rank < b.rank;
    });
  }
  return out;
}

Run flatten(const RunByTopic& by_topic) {
  Run out;
  for (const auto& [t, v] : by_topic) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace synthcoll
