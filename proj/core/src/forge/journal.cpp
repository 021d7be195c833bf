#include "synthcoll/forge/journal.hpp"

#include <filesystem>
#include <nlohmann/json.hpp>

#include "synthcoll/error.hpp"

namespace synthcoll::forge {

namespace {

using nlohmann::ordered_json;

constexpr std::string_view kHeaderTag = "synthcoll-forge-journal";

}  // namespace

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::kInit:
      return "INIT";
    case Phase::kSubtopics:
      return "SUBTOPICS";
    case Phase::kSubtopicDoc:
      return "SUBTOPIC_DOC";
    case Phase::kVariants:
      return "VARIANTS";
    case Phase::kTrickyDoc:
      return "TRICKY_DOC";
    case Phase::kRandomDoc:
      return "RANDOM_DOC";
  }
  return "INIT";
}

Phase parse_phase(std::string_view name) {
  for (const auto p : {Phase::kInit, Phase::kSubtopics, Phase::kSubtopicDoc,
                       Phase::kVariants, Phase::kTrickyDoc, Phase::kRandomDoc}) {
    if (phase_name(p) == name) return p;
  }
  throw PreconditionError("unknown pipeline phase '" + std::string(name) + "'");
}

std::string record_to_json(const JournalRecord& r) {
  ordered_json j;
  j["topic"] = r.key.topic;
  j["phase"] = phase_name(r.key.phase);
  j["ordinal"] = r.key.ordinal;
  j["usage"] = {{"prompt_tokens", r.usage.prompt_tokens},
                {"completion_tokens", r.usage.completion_tokens},
                {"estimated", r.usage_estimated}};
  if (r.doc) j["doc"] = ordered_json::parse(document_to_json(*r.doc));
  if (!r.items.empty() || r.key.phase == Phase::kSubtopics ||
      r.key.phase == Phase::kVariants) {
    j["items"] = r.items;
    j["shortfall"] = r.shortfall;
  }
  if (!r.failure.empty()) j["failure"] = r.failure;
  return j.dump();
}

JournalRecord record_from_json(std::string_view line) {
  const auto j = ordered_json::parse(line);
  JournalRecord r;
  r.key.topic = j.at("topic").get<std::string>();
  r.key.phase = parse_phase(j.at("phase").get<std::string>());
  r.key.ordinal = j.at("ordinal").get<std::uint32_t>();
  const auto& u = j.at("usage");
  r.usage.prompt_tokens = u.at("prompt_tokens").get<std::uint64_t>();
  r.usage.completion_tokens = u.at("completion_tokens").get<std::uint64_t>();
  r.usage_estimated = u.value("estimated", false);
  if (j.contains("doc")) r.doc = document_from_json(j.at("doc").dump());
  if (j.contains("items")) {
    r.items = j.at("items").get<std::vector<std::string>>();
    r.shortfall = j.value("shortfall", std::size_t{0});
  }
  r.failure = j.value("failure", std::string{});
  return r;
}

namespace {

// Parses every line; returns the header fingerprint (empty for an empty file).
std::string load_records(const std::string& path,
                         std::map<UnitKey, JournalRecord>& records) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::string fingerprint;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      if (line_no == 1) {
        const auto h = ordered_json::parse(line);
        if (h.value("journal", std::string{}) != kHeaderTag) {
          throw Error("missing journal header");
        }
        fingerprint = h.at("fingerprint").get<std::string>();
        continue;
      }
      auto r = record_from_json(line);
      auto key = r.key;
      if (!records.emplace(std::move(key), std::move(r)).second) {
        throw Error("duplicate unit");
      }
    } catch (const std::exception& e) {
      throw ParseError("corrupt journal record at line " +
                           std::to_string(line_no) + " of " + path + ": " +
                           e.what(),
                       line_no);
    }
  }
  return fingerprint;
}

}  // namespace

Journal Journal::open(const std::string& path, const std::string& fingerprint) {
  Journal j;
  j.path_ = path;
  const bool exists = std::filesystem::exists(path) &&
                      std::filesystem::file_size(path) > 0;
  if (exists) {
    j.fingerprint_ = load_records(path, j.records_);
    if (j.fingerprint_ != fingerprint) {
      throw CheckpointError("journal " + path +
                            " was written by a different configuration");
    }
  } else {
    j.fingerprint_ = fingerprint;
  }
  j.out_.open(path, std::ios::binary | std::ios::app);
  if (!j.out_) throw Error("cannot open journal '" + path + "' for writing");
  if (!exists) {
    ordered_json h;
    h["journal"] = kHeaderTag;
    h["fingerprint"] = fingerprint;
    j.out_ << h.dump() << '\n';
    j.out_.flush();
  }
  return j;
}

Journal Journal::read(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw Error("journal '" + path + "' does not exist");
  }
  Journal j;
  j.path_ = path;
  j.fingerprint_ = load_records(path, j.records_);
  return j;
}

Journal::Journal(Journal&& other) noexcept
    : path_(std::move(other.path_)),
      fingerprint_(std::move(other.fingerprint_)),
      records_(std::move(other.records_)),
      out_(std::move(other.out_)) {}

const JournalRecord* Journal::find(const UnitKey& key) const {
  std::lock_guard lock(mu_);
  const auto it = records_.find(key);
  return it == records_.end() ? nullptr : &it->second;
}

void Journal::append(const JournalRecord& record) {
  const std::string line = record_to_json(record);
  std::lock_guard lock(mu_);
  if (!out_.is_open()) throw Error("journal opened read-only");
  out_ << line << '\n';
  out_.flush();
  if (!out_) throw Error("write to journal '" + path_ + "' failed");
  records_.insert_or_assign(record.key, record);
}

std::size_t Journal::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

}  // namespace synthcoll::forge
