#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace udiscsp {

// Privacy costs and rewards are integral utility units; losses are
// stored as nonnegative magnitudes, utility is reward - loss.
using Cost = std::int64_t;

// Agents are indexed 0..n-1 in priority order (0 is the highest).
// Values are identifiers 1..d throughout the library.
struct Instance {
  int n = 0;
  int d = 0;
  std::vector<std::vector<bool>> availability;  // [agent][value - 1]
  std::vector<std::vector<Cost>> costs;         // [agent][value - 1]
  std::vector<Cost> rewards;

  bool available(int agent, int value) const;
  Cost cost(int agent, int value) const;
  std::vector<int> domain(int agent) const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Violation {
  std::string field;
  std::string message;
};

std::vector<Violation> validate(const Instance& instance);

struct Assignment {
  std::vector<std::optional<int>> values;

  bool complete() const;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Throws std::invalid_argument on a partial assignment.
bool isAgreement(const Instance& instance, const Assignment& a);

class PrivacyLedger {
 public:
  PrivacyLedger() = default;
  PrivacyLedger(int n, int d);

  bool revealed(int agent, int value) const;
  Cost loss(int agent) const { return lossPerAgent_.at(agent); }
  const std::vector<Cost>& lossPerAgent() const { return lossPerAgent_; }
  Cost totalLoss() const;
  double meanLoss() const;
  std::size_t revealedCount() const;

  // Returns the amount actually charged (0 if already public).
  Cost charge(const Instance& instance, int agent, int value);

  friend bool operator==(const PrivacyLedger&, const PrivacyLedger&) = default;

 private:
  void check(int agent, int value) const;

  int d_ = 0;
  std::vector<std::vector<bool>> revealed_;
  std::vector<Cost> lossPerAgent_;
};

Cost marginalCost(const Instance& instance, const PrivacyLedger& ledger,
                  int agent, int value);

PrivacyLedger chargeRevelation(PrivacyLedger ledger, const Instance& instance,
                               int agent, int value);

// The running example: a professor and two students, d = 3,
// D1 = {1,2}, D2 = {1,3}, D3 = {2,3}, costs (1,2,4) per agent.
Instance exampleInstance(Cost reward = 5);

}  // namespace udiscsp
