#include "synthcoll/eval/kendall.hpp"

#include <algorithm>

#include <cmath>
#include <nlohmann/json.hpp>

#include <fmt/format.h>

#include "synthcoll/error.hpp"

namespace synthcoll::eval {

TauVariant parse_tau_variant(std::string_view name) {
  if (name == "a" || name == "A" || name == "tau_a" || name == "TAU_A") return TauVariant::kTauA;
  if (name == "b" || name == "B" || name == "tau_b" || name == "TAU_B") return TauVariant::kTauB;
  throw PreconditionError("unknown tau variant '" + std::string(name) + "'");
}

RankCorrelation kendall_tau(std::span<const double> x, std::span<const double> y,
                            TauVariant variant) {
  if (x.size() != y.size()) {
    throw PreconditionError(fmt::format("kendall_tau: lengths differ ({} vs {})", x.size(), y.size()));
  }
  if (x.size() < 2) throw PreconditionError("kendall_tau needs at least 2 items");
  RankCorrelation r;
  r.variant = variant;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      const bool tx = dx == 0;
      const bool ty = dy == 0;
      r.ties_x += tx;
      r.ties_y += ty;
      r.ties_both += tx && ty;
      if (!tx && !ty) {
        if ((dx > 0) == (dy > 0)) {
          ++r.concordant;
        } else {
          ++r.discordant;
        }
      }
    }
  }
  const double t0 = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double diff = static_cast<double>(r.concordant) - static_cast<double>(r.discordant);
  if (variant == TauVariant::kTauA) {
    r.tau = diff / t0;
  } else {
    const double denom = (t0 - static_cast<double>(r.ties_x)) * (t0 - static_cast<double>(r.ties_y));
    if (denom <= 0) throw Error("degenerate ranking");
    r.tau = diff / std::sqrt(denom);
  }
  return r;
}

TauTable tau_table(const std::map<std::string, SystemScores, std::less<>>& scores,
                   TauVariant variant) {
  if (scores.size() < 2) throw PreconditionError("tau_table needs at least 2 collections");
  const auto& ref = scores.begin()->second;
  std::string missing;
  for (const auto& [name, systems] : scores) {
    for (const auto& [tag, v] : ref) {
      if (!systems.count(tag)) missing += fmt::format(" {}:{}", name, tag);
    }
    for (const auto& [tag, v] : systems) {
      if (!ref.count(tag)) missing += fmt::format(" {}:{}", scores.begin()->first, tag);
    }
  }
  if (!missing.empty()) throw Error("system tag sets differ; missing" + missing);

  TauTable table;
  std::vector<std::vector<double>> vectors;
  for (const auto& [name, systems] : scores) {
    table.collections.push_back(name);
    std::vector<double> v;
    for (const auto& [tag, s] : systems) v.push_back(s);
    vectors.push_back(std::move(v));
  }
  const std::size_t c = vectors.size();
  std::vector<bool> tied(c, false);
  for (std::size_t i = 0; i < c; ++i) {
    const auto& v = vectors[i];
    tied[i] = std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
    if (tied[i]) table.degenerate.push_back(table.collections[i]);
  }
  table.matrix.assign(c, std::vector<std::optional<double>>(c));
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i + 1; j < c; ++j) {
      if (variant == TauVariant::kTauB && (tied[i] || tied[j])) continue;
      const double t = kendall_tau(vectors[i], vectors[j], variant).tau;
      table.matrix[i][j] = t;
      table.matrix[j][i] = t;
    }
  }
  table.average.assign(c, std::nullopt);
  for (std::size_t j = 0; j < c; ++j) {
    double sum = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < c; ++i) {
      if (i != j && table.matrix[i][j]) {
        sum += *table.matrix[i][j];
        ++n;
      }
    }
    if (n > 0) table.average[j] = sum / static_cast<double>(n);
  }
  return table;
}

TauTable tau_table(const std::map<std::string, std::vector<MetricReport>, std::less<>>& reports,
                   const MetricId& metric, TauVariant variant) {
  std::map<std::string, SystemScores, std::less<>> scores;
  for (const auto& [name, list] : reports) {
    auto& s = scores[name];
    for (const auto& r : list) {
      if (!s.emplace(r.run_tag, r.value(metric)).second) {
        throw Error("collection " + name + " has two reports tagged " + r.run_tag);
      }
    }
  }
  return tau_table(scores, variant);
}

std::string TauTable::to_tsv(int decimals) const {
  std::string out = "collection";
  for (const auto& c : collections) out += "\t" + c;
  out += '\n';
  for (std::size_t i = 0; i < collections.size(); ++i) {
    out += collections[i];
    for (std::size_t j = 0; j < collections.size(); ++j) {
      out += '\t';
      if (matrix[i][j]) out += fmt::format("{:.{}f}", *matrix[i][j], decimals);
      else out += i == j ? "-" : "NA";
    }
    out += '\n';
  }
  out += "Average";
  for (const auto& a : average) out += a ? fmt::format("\t{:.{}f}", *a, decimals) : std::string("\tNA");
  out += '\n';
  if (!degenerate.empty()) {
    out += "# all systems tied, tau undefined:";
    for (const auto& d : degenerate) out += " " + d;
    out += '\n';
  }
  return out;
}

std::string TauTable::to_json() const {
  nlohmann::ordered_json j;
  j["collections"] = collections;
  auto& m = j["matrix"];
  m = nlohmann::ordered_json::array();
  for (const auto& row : matrix) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& cell : row) r.push_back(cell ? nlohmann::ordered_json(*cell) : nlohmann::ordered_json());
    m.push_back(std::move(r));
  }
  auto& avg = j["average"];
  avg = nlohmann::ordered_json::array();
  for (const auto& a : average) avg.push_back(a ? nlohmann::ordered_json(*a) : nlohmann::ordered_json());
  j["degenerate"] = degenerate;
  return j.dump(2);
}

}  // namespace synthcoll::eval
