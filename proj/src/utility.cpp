#include "udiscsp/utility.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "udiscsp/instance_io.hpp"

namespace udiscsp {

double futilityRisk(const FutilityStats& stats, double fallback) {
  if (stats.count == 0) return fallback;
  return 1.0 - static_cast<double>(stats.terminationCount) /
                   static_cast<double>(stats.count);
}

FutilityStats recordSend(FutilityStats stats) {
  ++stats.count;
  return stats;
}

FutilityStats recordTermination(FutilityStats stats, std::uint64_t messagesInRun,
                                bool terminated) {
  if (messagesInRun == 0 || !terminated) return stats;
  ++stats.terminationCount;
  return stats;
}

FutilityStats recordRun(FutilityStats stats, std::uint64_t sends, bool terminated) {
  stats.count += sends;
  return recordTermination(stats, sends, terminated);
}

FutilityStats loadStats(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
    FutilityStats s{doc.at("count").get<std::uint64_t>(),
                    doc.at("terminationCount").get<std::uint64_t>()};
    if (s.terminationCount > s.count)
      throw FormatError("terminationCount exceeds count");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed stats file: " + std::string(e.what()));
  }
}

void saveStats(const FutilityStats& stats, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  nlohmann::json doc{{"count", stats.count}, {"terminationCount", stats.terminationCount}};
  out << doc.dump(2) << '\n';
}

std::string_view to_string(RiskMode m) {
  return m == RiskMode::Offline ? "offline" : "online";
}

RiskMode parseRiskMode(std::string_view s) {
  if (s == "offline") return RiskMode::Offline;
  if (s == "online") return RiskMode::Online;
  throw std::invalid_argument("unknown risk mode '" + std::string(s) + "'");
}

double calculateCost(double risk, std::span<const double> costs, double probD) {
  if (costs.empty()) throw std::invalid_argument("calculateCost: empty value list");
  if (costs.size() == 1) return costs.front() * probD;
  // The head is a one-value call; the pseudocode passes 1 - risk to it,
  // which the base case never reads.
  const double costRound = calculateCost(1.0 - risk, costs.first(1), probD);
  const double costNonTerminal = calculateCost(risk, costs.subspan(1), risk * probD);
  return costRound + costNonTerminal;
}

double calculateCostClosedForm(double risk, std::span<const double> costs, double probD) {
  if (costs.empty()) throw std::invalid_argument("calculateCost: empty value list");
  double total = 0.0;
  double weight = probD;
  for (double c : costs) {
    total += c * weight;
    weight *= risk;
  }
  return total;
}

Decision decideContinue(const Instance& instance, const PrivacyLedger& ledger,
                        double risk, std::span<const int> unrevealed, Cost reward,
                        int agent) {
  Decision out;
  out.estimatedCost = static_cast<double>(ledger.loss(agent));
  if (!unrevealed.empty()) {
    std::vector<double> m;
    m.reserve(unrevealed.size());
    for (int v : unrevealed)
      m.push_back(static_cast<double>(marginalCost(instance, ledger, agent, v)));
    out.estimatedCost += calculateCost(risk, m, 1.0);
  }
  out.verdict = out.estimatedCost >= static_cast<double>(reward) ? Verdict::Interrupt
                                                                  : Verdict::Continue;
  return out;
}

std::vector<int> unrevealedOrder(const Instance& instance, const PrivacyLedger& ledger,
                                 int agent, std::span<const int> revealedNow) {
  std::vector<int> out;
  auto take = [&](int v) {
    if (!ledger.revealed(agent, v) && std::find(out.begin(), out.end(), v) == out.end())
      out.push_back(v);
  };
  for (int v : revealedNow) take(v);
  for (int v = 1; v <= instance.d; ++v)
    if (instance.available(agent, v)) take(v);
  for (int v = 1; v <= instance.d; ++v)
    if (!instance.available(agent, v)) take(v);
  return out;
}

}  // namespace udiscsp
