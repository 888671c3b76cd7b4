#include "udiscsp/instance.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace udiscsp {

bool Instance::available(int agent, int value) const {
  return availability.at(agent).at(value - 1);
}

Cost Instance::cost(int agent, int value) const {
  return costs.at(agent).at(value - 1);
}

std::vector<int> Instance::domain(int agent) const {
  std::vector<int> out;
  for (int v = 1; v <= d; ++v)
    if (available(agent, v)) out.push_back(v);
  return out;
}

std::vector<Violation> validate(const Instance& instance) {
  std::vector<Violation> out;
  const auto n = instance.n;
  const auto d = instance.d;
  if (n <= 0) out.push_back({"n", "must be positive"});
  if (d <= 0) out.push_back({"d", "must be positive"});
  const auto rows = static_cast<std::size_t>(std::max(n, 0));
  const auto cols = static_cast<std::size_t>(std::max(d, 0));

  auto shapeOk = [&](const auto& m) {
    return m.size() == rows &&
           std::all_of(m.begin(), m.end(),
                       [&](const auto& row) { return row.size() == cols; });
  };
  if (!shapeOk(instance.availability))
    out.push_back({"availability", "expected n rows of d entries"});
  if (!shapeOk(instance.costs)) {
    out.push_back({"costs", "expected n rows of d entries"});
  } else {
    for (const auto& row : instance.costs)
      if (std::any_of(row.begin(), row.end(), [](Cost c) { return c < 0; })) {
        out.push_back({"costs", "negative entry"});
        break;
      }
  }
  if (instance.rewards.size() != rows)
    out.push_back({"rewards", "expected n entries"});
  else if (std::any_of(instance.rewards.begin(), instance.rewards.end(),
                       [](Cost r) { return r < 0; }))
    out.push_back({"rewards", "negative entry"});
  return out;
}

bool Assignment::complete() const {
  return std::all_of(values.begin(), values.end(),
                     [](const auto& v) { return v.has_value(); });
}

bool isAgreement(const Instance& instance, const Assignment& a) {
  if (a.values.size() != static_cast<std::size_t>(instance.n) || !a.complete())
    throw std::invalid_argument("isAgreement: assignment is not complete");
  const int k = *a.values.front();
  for (int i = 0; i < instance.n; ++i) {
    const int v = *a.values[i];
    if (v != k || v < 1 || v > instance.d || !instance.available(i, v))
      return false;
  }
  return true;
}

PrivacyLedger::PrivacyLedger(int n, int d)
    : d_(d),
      revealed_(n, std::vector<bool>(d, false)),
      lossPerAgent_(n, 0) {}

void PrivacyLedger::check(int agent, int value) const {
  if (agent < 0 || agent >= static_cast<int>(revealed_.size()) || value < 1 ||
      value > d_)
    throw std::out_of_range("ledger index out of range");
}

bool PrivacyLedger::revealed(int agent, int value) const {
  check(agent, value);
  return revealed_[agent][value - 1];
}

Cost PrivacyLedger::totalLoss() const {
  return std::accumulate(lossPerAgent_.begin(), lossPerAgent_.end(), Cost{0});
}

double PrivacyLedger::meanLoss() const {
  if (lossPerAgent_.empty()) return 0.0;
  return static_cast<double>(totalLoss()) /
         static_cast<double>(lossPerAgent_.size());
}

std::size_t PrivacyLedger::revealedCount() const {
  std::size_t c = 0;
  for (const auto& row : revealed_)
    c += static_cast<std::size_t>(std::count(row.begin(), row.end(), true));
  return c;
}

Cost PrivacyLedger::charge(const Instance& instance, int agent, int value) {
  check(agent, value);
  if (revealed_[agent][value - 1]) return 0;
  const Cost c = instance.cost(agent, value);
  revealed_[agent][value - 1] = true;
  lossPerAgent_[agent] += c;
  return c;
}

Cost marginalCost(const Instance& instance, const PrivacyLedger& ledger,
                  int agent, int value) {
  if (agent < 0 || agent >= instance.n || value < 1 || value > instance.d)
    throw std::out_of_range("marginalCost: index out of range");
  return ledger.revealed(agent, value) ? 0 : instance.cost(agent, value);
}

PrivacyLedger chargeRevelation(PrivacyLedger ledger, const Instance& instance,
                               int agent, int value) {
  ledger.charge(instance, agent, value);
  return ledger;
}

Instance exampleInstance(Cost reward) {
  Instance x;
  x.n = 3;
  x.d = 3;
  x.availability = {{true, true, false}, {true, false, true}, {false, true, true}};
  x.costs = {{1, 2, 4}, {1, 2, 4}, {1, 2, 4}};
  x.rewards = {reward, reward, reward};
  return x;
}

}  // namespace udiscsp
