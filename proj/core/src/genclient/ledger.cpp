#include "synthcoll/genclient/ledger.hpp"

#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>

#include "synthcoll/error.hpp"

namespace synthcoll::genclient {

using nlohmann::json;

UsageLedger::UsageLedger(const UsageLedger& other) {
  std::lock_guard lock(other.mu_);
  totals_ = other.totals_;
  subtotals_ = other.subtotals_;
  requests_ = other.requests_;
  estimated_ = other.estimated_;
}

UsageLedger& UsageLedger::operator=(const UsageLedger& other) {
  if (this == &other) return *this;
  UsageLedger copy(other);
  std::lock_guard lock(mu_);
  totals_ = copy.totals_;
  subtotals_ = std::move(copy.subtotals_);
  requests_ = copy.requests_;
  estimated_ = copy.estimated_;
  return *this;
}

void UsageLedger::add(std::string_view category, std::string_view phase,
                      const Usage& usage, bool estimated) {
  std::string key;
  key.reserve(category.size() + phase.size() + 1);
  key.append(category).append("/").append(phase);
  std::lock_guard lock(mu_);
  totals_ += usage;
  subtotals_[key] += usage;
  ++requests_;
  if (estimated) ++estimated_;
}

void UsageLedger::merge(const UsageLedger& other) {
  const UsageLedger copy(other);
  std::lock_guard lock(mu_);
  totals_ += copy.totals_;
  for (const auto& [k, v] : copy.subtotals_) subtotals_[k] += v;
  requests_ += copy.requests_;
  estimated_ += copy.estimated_;
}

Usage UsageLedger::totals() const {
  std::lock_guard lock(mu_);
  return totals_;
}

std::map<std::string, Usage> UsageLedger::subtotals() const {
  std::lock_guard lock(mu_);
  return {subtotals_.begin(), subtotals_.end()};
}

std::uint64_t UsageLedger::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::uint64_t UsageLedger::estimated_requests() const {
  std::lock_guard lock(mu_);
  return estimated_;
}

std::string UsageLedger::to_json() const {
  std::lock_guard lock(mu_);
  json j;
  j["total_prompt_tokens"] = totals_.prompt_tokens;
  j["total_completion_tokens"] = totals_.completion_tokens;
  j["requests"] = requests_;
  j["estimated_requests"] = estimated_;
  json subs = json::object();
  for (const auto& [k, v] : subtotals_) {
    subs[k] = {{"prompt_tokens", v.prompt_tokens},
               {"completion_tokens", v.completion_tokens}};
  }
  j["subtotals"] = std::move(subs);
  return j.dump(2) + "\n";
}

UsageLedger UsageLedger::from_json(std::string_view text) {
  UsageLedger out;
  try {
    const json j = json::parse(text);
    out.totals_.prompt_tokens = j.at("total_prompt_tokens").get<std::uint64_t>();
    out.totals_.completion_tokens =
        j.at("total_completion_tokens").get<std::uint64_t>();
    out.requests_ = j.value("requests", std::uint64_t{0});
    out.estimated_ = j.value("estimated_requests", std::uint64_t{0});
    Usage sum;
    if (j.contains("subtotals")) {
      for (const auto& [k, v] : j.at("subtotals").items()) {
        Usage u{v.at("prompt_tokens").get<std::uint64_t>(),
                v.at("completion_tokens").get<std::uint64_t>()};
        out.subtotals_[k] = u;
        sum += u;
      }
      if (!out.subtotals_.empty() && !(sum == out.totals_)) {
        throw InvariantError("ledger subtotals do not sum to totals");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid ledger JSON: ") + e.what(), 0);
  }
  return out;
}

UsageLedger UsageLedger::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open ledger '" + path + "'");
  const std::string text(std::istreambuf_iterator<char>(in), {});
  return from_json(text);
}

UsageLedger UsageLedger::from_totals(const Usage& totals) {
  UsageLedger out;
  out.totals_ = totals;
  return out;
}

CostEstimate cost_estimate(const Usage& usage, const PriceTable& prices) {
  CostEstimate c;
  c.usd = static_cast<double>(usage.prompt_tokens) / 1e6 *
              prices.usd_per_million_input +
          static_cast<double>(usage.completion_tokens) / 1e6 *
              prices.usd_per_million_output;
  c.kwh = static_cast<double>(usage.total()) * prices.wh_per_token / 1000.0;
  return c;
}

CostEstimate cost_estimate(const UsageLedger& ledger, const PriceTable& prices) {
  return cost_estimate(ledger.totals(), prices);
}

}  // namespace synthcoll::genclient
