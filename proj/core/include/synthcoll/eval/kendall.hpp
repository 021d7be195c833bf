#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "synthcoll/eval/metrics.hpp"

namespace synthcoll::eval {

enum class TauVariant { kTauA, kTauB };
TauVariant parse_tau_variant(std::string_view name);

struct RankCorrelation {
  double tau = 0;
  std::uint64_t concordant = 0;
  std::uint64_t discordant = 0;
  std::uint64_t ties_x = 0;     // pairs tied in x (including joint ties)
  std::uint64_t ties_y = 0;     // pairs tied in y (including joint ties)
  std::uint64_t ties_both = 0;  // pairs tied in both
  TauVariant variant = TauVariant::kTauB;
};

/// O(n^2) pair counting. TAU_A = (C - D) / T0; TAU_B = (C - D) /
/// sqrt((T0 - Tx)(T0 - Ty)). Throws PreconditionError on length mismatch or
/// n < 2 and Error("degenerate ranking") when the TAU_B denominator is 0.
RankCorrelation kendall_tau(std::span<const double> x, std::span<const double> y,
                            TauVariant variant = TauVariant::kTauB);

/// System tag -> score for one collection under one metric.
using SystemScores = std::map<std::string, double, std::less<>>;

struct TauTable {
  std::vector<std::string> collections;
  /// matrix[i][j]; the diagonal is empty. Under TAU_B an off-diagonal cell
  /// is empty too when either collection ties every system.
  std::vector<std::vector<std::optional<double>>> matrix;
  /// Column means over the defined off-diagonal cells.
  std::vector<std::optional<double>> average;
  /// Collections whose scores tie every system (TAU_B undefined against them).
  std::vector<std::string> degenerate;

  std::string to_tsv(int decimals = 4) const;
  std::string to_json() const;
};

/// Every collection must score the same system tags; otherwise Error lists
/// the missing ones. Degenerate cells are left empty rather than thrown.
TauTable tau_table(const std::map<std::string, SystemScores, std::less<>>& scores,
                   TauVariant variant = TauVariant::kTauB);

/// Extracts `metric` from each report (keyed by run tag) and builds the table.
TauTable tau_table(const std::map<std::string, std::vector<MetricReport>, std::less<>>& reports,
                   const MetricId& metric, TauVariant variant = TauVariant::kTauB);

}  // namespace synthcoll::eval
