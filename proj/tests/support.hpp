#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "udiscsp/generator.hpp"
#include "udiscsp/rng.hpp"
#include "udiscsp/runtime.hpp"

namespace testing {

using namespace udiscsp;

inline Instance openInstance(int n, int d, Cost cost = 1, Cost reward = 20) {
  Instance x;
  x.n = n;
  x.d = d;
  x.availability.assign(n, std::vector<bool>(d, true));
  x.costs.assign(n, std::vector<Cost>(d, cost));
  x.rewards.assign(n, reward);
  return x;
}

// Every availability pattern for every n in [1, maxN], d in [1, maxD].
inline void forEachPattern(int maxN, int maxD, const std::function<void(const Instance&)>& f) {
  for (int n = 1; n <= maxN; ++n)
    for (int d = 1; d <= maxD; ++d) {
      const int cells = n * d;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
        auto x = openInstance(n, d);
        for (int c = 0; c < cells; ++c) x.availability[c / d][c % d] = (mask >> c) & 1;
        f(x);
      }
    }
}

inline Instance withCosts(Instance x, Cost c) {
  for (auto& row : x.costs)
    for (auto& v : row) v = c;
  return x;
}

// Network double for driving a single agent by hand.
struct FakeNet final : Network {
  Instance x;
  PrivacyLedger book;
  double risk = kDefaultRisk;
  std::vector<Message> sent;

  explicit FakeNet(Instance inst) : x(std::move(inst)), book(x.n, x.d) {}
  void send(Message m) override { sent.push_back(std::move(m)); }
  const Instance& instance() const override { return x; }
  PrivacyLedger& ledger() override { return book; }
  double futilityRisk() const override { return risk; }
};

}  // namespace testing
