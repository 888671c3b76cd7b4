#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "udiscsp/runtime.hpp"

namespace udiscsp {

enum class Algorithm { SyncBT, ABT, SyncBTU, ABTU };

std::string_view to_string(Algorithm a);
Algorithm parseAlgorithm(std::string_view s);
bool usesUtility(Algorithm a);
inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::SyncBT, Algorithm::ABT,
                                               Algorithm::SyncBTU, Algorithm::ABTU};

using Nogood = std::vector<Binding>;  // sorted by agent

// Values a nogood sent by `agent` exposes as unavailable: with an empty
// nogood every unavailable value, otherwise the shared value of all its
// pairs when the sender cannot take it.
std::vector<int> revealedByNogood(const Instance& instance, int agent, const Nogood& ng);

// Decision hook placed in front of every send that reveals something new.
// Disabled, it always lets the send through.
class UtilityGuard {
 public:
  explicit UtilityGuard(bool enabled = false) : enabled_(enabled) {}
  bool enabled() const { return enabled_; }
  // False after emitting Stop(interrupted); the caller must not send.
  bool allows(Network& net, int agent, std::span<const int> revealedNow) const;

 private:
  bool enabled_;
};

class SyncBtAgent final : public Agent {
 public:
  SyncBtAgent(int id, int n, int d, UtilityGuard guard = UtilityGuard{});

  void start(Network& net) override;
  void receive(const Message& m, bool morePending, Network& net) override;
  std::optional<int> value() const override { return value_; }
  bool locallyConsistent(const Instance& instance) const override;

  const std::vector<Binding>& cpa() const { return cpa_; }

 private:
  void assign(Network& net);
  void backtrack(Network& net);

  int id_;
  int n_;
  int d_;
  UtilityGuard guard_;
  std::vector<Binding> cpa_;
  std::vector<bool> tried_;
  std::optional<int> value_;
};

class AbtAgent final : public Agent {
 public:
  // Complete constraint graph: every higher agent links to every lower one.
  AbtAgent(int id, int n, int d, UtilityGuard guard = UtilityGuard{});
  AbtAgent(int id, int d, std::set<int> higherLinks, std::set<int> lowerLinks,
           UtilityGuard guard = UtilityGuard{});

  void start(Network& net) override;
  void receive(const Message& m, bool morePending, Network& net) override;
  std::optional<int> value() const override { return current_; }
  bool locallyConsistent(const Instance& instance) const override;

  const std::map<int, int>& view() const { return view_; }
  const std::vector<Nogood>& nogoods() const { return store_; }
  const std::set<int>& higherLinks() const { return higher_; }
  const std::set<int>& lowerLinks() const { return lower_; }

 private:
  bool applies(const Nogood& ng, int v) const;
  bool consistent(const Instance& instance, int v) const;
  bool matchesView(const Nogood& ng) const;
  Nogood explanation(int v) const;
  void checkAgentView(Network& net, bool triggered);
  void backtrack(Network& net);

  int id_;
  int d_;
  UtilityGuard guard_;
  std::set<int> higher_;
  std::set<int> lower_;
  std::map<int, int> view_;
  std::optional<int> current_;
  std::vector<Nogood> store_;
  bool stopped_ = false;

  bool inBatch_ = false;
  std::optional<int> batchStartValue_;
  std::vector<int> nogoodSenders_;
};

std::vector<std::unique_ptr<Agent>> makeAgents(const Instance& instance, Algorithm algo);

struct SolveOptions {
  WorldConfig world;
  std::optional<std::uint64_t> stepLimit;  // default 10000 * n
};

struct SolveResult {
  Outcome outcome;
  std::vector<Message> trace;
  FutilityStats stats;  // the world's stats after the run (moves online)
};

SolveResult solve(const Instance& instance, Algorithm algo, const SolveOptions& options = {});

}  // namespace udiscsp
