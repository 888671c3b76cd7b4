#include <doctest.h>

#include <stdexcept>

#include "udiscsp/instance.hpp"
#include "udiscsp/instance_io.hpp"
#include "udiscsp/rng.hpp"

using namespace udiscsp;

namespace {

Instance open(int n, int d) {
  Instance x;
  x.n = n;
  x.d = d;
  x.availability.assign(n, std::vector<bool>(d, true));
  x.costs.assign(n, std::vector<Cost>(d, 1));
  x.rewards.assign(n, 10);
  return x;
}

// Independent oracle: an agreement is a column k of the availability
// matrix that is all true, with every agent on k.
bool agreementOracle(const Instance& x, const std::vector<int>& a) {
  for (int i = 0; i < x.n; ++i)
    if (a[i] != a[0] || !x.availability[i][a[i] - 1]) return false;
  return true;
}

}  // namespace

TEST_CASE("validate accepts the running example") {
  CHECK(validate(exampleInstance()).empty());
}

TEST_CASE("validate names the offending field") {
  auto x = exampleInstance();
  x.rewards.pop_back();
  auto v = validate(x);
  REQUIRE(v.size() == 1);
  CHECK(v[0].field == "rewards");

  x = exampleInstance();
  x.costs[1][2] = -1;
  v = validate(x);
  REQUIRE(v.size() == 1);
  CHECK(v[0].field == "costs");

  x = exampleInstance();
  x.availability[0].pop_back();
  v = validate(x);
  REQUIRE(v.size() == 1);
  CHECK(v[0].field == "availability");
}

TEST_CASE("an empty domain is legal input") {
  auto x = exampleInstance();
  x.availability[2] = {false, false, false};
  CHECK(validate(x).empty());
  CHECK(x.domain(2).empty());
}

TEST_CASE("isAgreement on the running example") {
  const auto x = exampleInstance();
  CHECK_FALSE(isAgreement(x, Assignment{{1, 1, 1}}));
  int agreements = 0;
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b)
      for (int c = 1; c <= 3; ++c) agreements += isAgreement(x, Assignment{{a, b, c}});
  CHECK(agreements == 0);
}

TEST_CASE("isAgreement without unavailabilities") {
  const auto x = open(4, 5);
  for (int k = 1; k <= 5; ++k) CHECK(isAgreement(x, Assignment{{k, k, k, k}}));
  CHECK_FALSE(isAgreement(x, Assignment{{1, 1, 2, 1}}));
}

TEST_CASE("isAgreement rejects partial assignments") {
  const auto x = exampleInstance();
  CHECK_THROWS_AS(isAgreement(x, Assignment{{1, std::nullopt, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(isAgreement(x, Assignment{{1, 1}}), std::invalid_argument);
}

TEST_CASE("isAgreement matches the column oracle on small instances") {
  Rng rng(11);
  for (int trial = 0; trial < 1500; ++trial) {
    const int n = static_cast<int>(rng.uniformInt(1, 4));
    const int d = static_cast<int>(rng.uniformInt(1, 4));
    auto x = open(n, d);
    for (auto& row : x.availability)
      for (auto&& cell : row) cell = rng.bernoulli(0.7);
    std::vector<int> a(n, 1);
    for (;;) {
      Assignment as;
      for (int v : a) as.values.push_back(v);
      REQUIRE(isAgreement(x, as) == agreementOracle(x, a));
      int i = 0;
      while (i < n && a[i] == d) a[i++] = 1;
      if (i == n) break;
      ++a[i];
    }
  }
}

TEST_CASE("marginalCost") {
  const auto x = exampleInstance();
  PrivacyLedger ledger(3, 3);
  CHECK(marginalCost(x, ledger, 0, 2) == 2);
  ledger.charge(x, 1, 1);
  CHECK(marginalCost(x, ledger, 1, 3) == 4);
  CHECK(marginalCost(x, ledger, 1, 1) == 0);
  CHECK_THROWS_AS(marginalCost(x, ledger, 3, 1), std::out_of_range);
  CHECK_THROWS_AS(marginalCost(x, ledger, 0, 4), std::out_of_range);
  CHECK_THROWS_AS(marginalCost(x, ledger, 0, 0), std::out_of_range);
}

TEST_CASE("chargeRevelation") {
  const auto x = exampleInstance();
  auto ledger = chargeRevelation(PrivacyLedger(3, 3), x, 1, 1);
  ledger = chargeRevelation(ledger, x, 1, 3);
  CHECK(ledger.loss(1) == 5);

  const auto twice = chargeRevelation(ledger, x, 1, 3);
  CHECK(twice == ledger);

  ledger = chargeRevelation(ledger, x, 1, 2);
  CHECK(ledger.loss(1) == 7);
  CHECK(ledger.loss(0) == 0);
  CHECK(ledger.revealedCount() == 3);
  CHECK_THROWS_AS(chargeRevelation(ledger, x, -1, 1), std::out_of_range);
}

TEST_CASE("ledger sums stay exact and monotone under random charges") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto x = open(5, 6);
    for (auto& row : x.costs)
      for (auto& c : row) c = rng.uniformInt(0, 1000000007);
    PrivacyLedger ledger(5, 6);
    std::vector<std::vector<bool>> seen(5, std::vector<bool>(6, false));
    for (int k = 0; k < 40; ++k) {
      const int i = static_cast<int>(rng.uniformInt(0, 4));
      const int v = static_cast<int>(rng.uniformInt(1, 6));
      const auto before = ledger.loss(i);
      ledger.charge(x, i, v);
      seen[i][v - 1] = true;
      REQUIRE(ledger.loss(i) >= before);
    }
    for (int i = 0; i < 5; ++i) {
      Cost expect = 0;
      for (int v = 1; v <= 6; ++v)
        if (seen[i][v - 1]) expect += x.costs[i][v - 1];
      REQUIRE(ledger.loss(i) == expect);
    }
  }
}

TEST_CASE("instance documents round-trip") {
  const auto x = exampleInstance(20);
  const auto text = toJson(x);
  CHECK(instanceFromJson(text) == x);
  CHECK(toJson(instanceFromJson(text)) == text);
}

TEST_CASE("malformed instance documents") {
  CHECK_THROWS_AS(instanceFromJson("{"), FormatError);
  CHECK_THROWS_AS(instanceFromJson("[1,2]"), FormatError);
  CHECK_THROWS_WITH_AS(instanceFromJson(R"({"n":1,"d":1,"availability":[[true]],"costs":[[1]]})"),
                       doctest::Contains("rewards"), FormatError);
  CHECK_THROWS_WITH_AS(
      instanceFromJson(R"({"n":1,"d":1,"availability":[[true]],"costs":[[-3]],"rewards":[1]})"),
      doctest::Contains("costs"), FormatError);
  CHECK_THROWS_WITH_AS(
      instanceFromJson(R"({"n":1,"d":1,"availability":[["x"]],"costs":[[3]],"rewards":[1]})"),
      doctest::Contains("availability"), FormatError);
}
