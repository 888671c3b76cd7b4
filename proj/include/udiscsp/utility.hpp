#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "udiscsp/instance.hpp"

namespace udiscsp {

inline constexpr double kDefaultRisk = 0.5;

struct FutilityStats {
  std::uint64_t count = 0;             // Ok?/Nogood messages sent
  std::uint64_t terminationCount = 0;  // of which led to termination

  friend bool operator==(const FutilityStats&, const FutilityStats&) = default;
};

// 1 - terminationCount/count, or `fallback` before anything was observed.
double futilityRisk(const FutilityStats& stats, double fallback = kDefaultRisk);

FutilityStats recordSend(FutilityStats stats);
// Credits the message that ended a run. A run that sent nothing leaves the
// stats untouched; `terminated` is false for interrupted or cut-off runs.
FutilityStats recordTermination(FutilityStats stats, std::uint64_t messagesInRun,
                                bool terminated = true);
FutilityStats recordRun(FutilityStats stats, std::uint64_t sends, bool terminated);

FutilityStats loadStats(const std::filesystem::path& path);
void saveStats(const FutilityStats& stats, const std::filesystem::path& path);

// Offline: one risk snapshot per run. Online: the snapshot follows the
// stats as each message is sent.
enum class RiskMode { Offline, Online };
std::string_view to_string(RiskMode m);
RiskMode parseRiskMode(std::string_view s);

// Expected future privacy loss when the values are revealed in order and
// each revelation fails to end the search with probability `risk`.
// Throws std::invalid_argument on an empty list.
double calculateCost(double risk, std::span<const double> marginalCosts, double probD);
double calculateCostClosedForm(double risk, std::span<const double> marginalCosts,
                               double probD);

enum class Verdict { Continue, Interrupt };

struct Decision {
  Verdict verdict = Verdict::Continue;
  double estimatedCost = 0.0;
};

// estimatedCost = sunk loss of `agent` + calculateCost over the marginal
// costs of `unrevealed` (probD = 1). Interrupts when it reaches the reward.
Decision decideContinue(const Instance& instance, const PrivacyLedger& ledger,
                        double risk, std::span<const int> unrevealed, Cost reward,
                        int agent);

// The order in which an agent expects to give away the rest of its row:
// what the pending send reveals, then its other unrevealed available
// values, then its unrevealed unavailable values (each ascending).
std::vector<int> unrevealedOrder(const Instance& instance, const PrivacyLedger& ledger,
                                 int agent, std::span<const int> revealedNow);

}  // namespace udiscsp
