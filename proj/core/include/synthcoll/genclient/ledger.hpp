#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <string_view>

namespace synthcoll::genclient {

struct Usage {
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;

  std::uint64_t total() const noexcept { return prompt_tokens + completion_tokens; }
  Usage& operator+=(const Usage& o) noexcept {
    prompt_tokens += o.prompt_tokens;
    completion_tokens += o.completion_tokens;
    return *this;
  }
  friend Usage operator+(Usage a, const Usage& b) noexcept { return a += b; }
  friend bool operator==(const Usage&, const Usage&) = default;
};

/// Token accounting, split by "<document category>/<pipeline phase>".
/// Subtotals always sum to the totals: both are updated under one lock.
class UsageLedger {
 public:
  UsageLedger() = default;
  UsageLedger(const UsageLedger& other);
  UsageLedger& operator=(const UsageLedger& other);

  void add(std::string_view category, std::string_view phase,
           const Usage& usage, bool estimated = false);
  void merge(const UsageLedger& other);

  Usage totals() const;
  std::map<std::string, Usage> subtotals() const;
  std::uint64_t requests() const;
  std::uint64_t estimated_requests() const;

  /// {"total_prompt_tokens":..,"total_completion_tokens":..,"requests":..,
  ///  "estimated_requests":..,"subtotals":{"KEY":{"prompt_tokens":..,
  ///  "completion_tokens":..}}}. Keys are sorted, so output is stable.
  std::string to_json() const;
  static UsageLedger from_json(std::string_view text);
  static UsageLedger load(const std::string& path);

  /// A ledger carrying only totals, e.g. reported figures from elsewhere.
  static UsageLedger from_totals(const Usage& totals);

 private:
  mutable std::mutex mu_;
  Usage totals_;
  std::map<std::string, Usage, std::less<>> subtotals_;
  std::uint64_t requests_ = 0;
  std::uint64_t estimated_ = 0;
};

struct PriceTable {
  double usd_per_million_input = 1.50;
  double usd_per_million_output = 2.00;
  double wh_per_token = 0.015;
};

struct CostEstimate {
  double usd = 0;
  double kwh = 0;
};

CostEstimate cost_estimate(const Usage& usage, const PriceTable& prices);
CostEstimate cost_estimate(const UsageLedger& ledger, const PriceTable& prices);

}  // namespace synthcoll::genclient
