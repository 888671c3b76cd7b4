#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "udiscsp/solvers.hpp"

using namespace udiscsp;
using testing::FakeNet;

namespace {

std::vector<std::string> lines(const std::vector<Message>& trace) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < trace.size(); ++k) out.push_back(formatMessage(trace[k], k + 1));
  return out;
}

bool nogoodImplied(const Instance& x, const Nogood& ng) {
  const int v = ng.front().value;
  for (const auto& b : ng)
    if (b.value != v) return true;
  for (int i = 0; i < x.n; ++i)
    if (!x.available(i, v)) return true;
  return false;
}

}  // namespace

TEST_CASE("SyncBT opening moves on the running example") {
  const auto x = exampleInstance();
  FakeNet net(x);
  SyncBtAgent a1(0, 3, 3);
  a1.start(net);
  REQUIRE(net.sent.size() == 1);
  CHECK(net.sent[0].kind == MessageKind::Ok);
  CHECK(net.sent[0].recipient == 1);
  CHECK(net.sent[0].binding == Binding{0, 1});

  SyncBtAgent a2(1, 3, 3);
  a2.receive(net.sent[0], false, net);
  REQUIRE(net.sent.size() == 2);
  CHECK(net.sent[1].binding == Binding{1, 1});
  CHECK(net.sent[1].context == std::vector<Binding>{{0, 1}, {1, 1}});
}

TEST_CASE("SyncBT backtracks to the previous agent") {
  const auto x = exampleInstance();
  FakeNet net(x);
  SyncBtAgent a3(2, 3, 3);
  a3.receive(Message::ok(1, 2, 1, {{0, 1}, {1, 1}}), false, net);
  REQUIRE(net.sent.size() == 1);
  CHECK(net.sent[0].kind == MessageKind::Nogood);
  CHECK(net.sent[0].recipient == 1);
  CHECK(net.sent[0].binding == Binding{1, 1});
  CHECK(net.book.loss(2) == 1);  // x3 = 1 is now known to be impossible
}

TEST_CASE("SyncBT agent with an empty domain backtracks at once") {
  auto x = exampleInstance();
  x.availability[1] = {false, false, false};
  FakeNet net(x);
  SyncBtAgent a2(1, 3, 3);
  a2.receive(Message::ok(0, 1, 1, {{0, 1}}), false, net);
  REQUIRE(net.sent.size() == 1);
  CHECK(net.sent[0].kind == MessageKind::Nogood);
  CHECK(net.sent[0].recipient == 0);

  x.availability[0] = {false, false, false};
  FakeNet head(x);
  SyncBtAgent a1(0, 3, 3);
  a1.start(head);
  REQUIRE(head.sent.size() == 1);
  CHECK(head.sent[0].kind == MessageKind::Stop);
  CHECK(head.sent[0].reason == StopReason::Exhausted);
  CHECK(head.book.loss(0) == 7);
}

TEST_CASE("SyncBT on the running example exhausts the first agent") {
  const auto r = solve(exampleInstance(), Algorithm::SyncBT);
  CHECK(r.outcome.status == RunStatus::NoSolution);
  CHECK(r.outcome.stoppedBy == 0);
  CHECK(r.outcome.messages == 6);
}

TEST_CASE("SyncBT on an unconstrained instance") {
  const auto x = testing::openInstance(3, 3);
  const auto r = solve(x, Algorithm::SyncBT);
  CHECK(r.outcome.status == RunStatus::Agreement);
  CHECK(r.outcome.finalAssignment == Assignment{{1, 1, 1}});
  CHECK(r.outcome.messages == 2);
  CHECK(std::all_of(r.trace.begin(), r.trace.end(),
                    [](const Message& m) { return m.kind == MessageKind::Ok; }));
}

TEST_CASE("single agent with values agrees without messages") {
  for (auto algo : kAllAlgorithms) {
    const auto r = solve(testing::openInstance(1, 3), algo);
    CHECK(r.outcome.status == RunStatus::Agreement);
    CHECK(r.outcome.messages == 0);
    CHECK(r.outcome.finalAssignment == Assignment{{1}});
  }
}

TEST_CASE("ABT first agent opens with Ok? to everyone below") {
  const auto x = exampleInstance();
  FakeNet net(x);
  AbtAgent a1(0, 3, 3);
  a1.start(net);
  REQUIRE(net.sent.size() == 2);
  CHECK(net.sent[0].recipient == 1);
  CHECK(net.sent[1].recipient == 2);
  for (const auto& m : net.sent) CHECK(m.binding == Binding{0, 1});
  CHECK(net.book.loss(0) == 1);

  AbtAgent a3(2, 3, 3);
  FakeNet quiet(x);
  a3.start(quiet);
  CHECK(quiet.sent.empty());
}

TEST_CASE("ABT Ok? handling") {
  const auto x = exampleInstance();
  FakeNet net(x);
  AbtAgent a2(1, 3, 3);
  a2.receive(Message::ok(0, 1, 1), false, net);
  REQUIRE(net.sent.size() == 1);
  CHECK(net.sent[0].binding == Binding{1, 1});
  CHECK(net.sent[0].recipient == 2);

  a2.receive(Message::ok(0, 1, 1), false, net);
  CHECK(net.sent.size() == 1);
  CHECK(a2.locallyConsistent(x));
}

TEST_CASE("ABT records a link from an unlinked sender") {
  const auto x = testing::openInstance(4, 2);
  FakeNet net(x);
  // Chain links only: 2 hears from 1 and talks to 3.
  AbtAgent a(2, 2, std::set<int>{1}, std::set<int>{3});
  a.receive(Message::ok(0, 2, 2), false, net);
  CHECK(a.higherLinks() == std::set<int>{0, 1});
  CHECK(a.view().at(0) == 2);
  REQUIRE(net.sent.size() == 1);
  CHECK(net.sent[0].recipient == 3);
  CHECK(net.sent[0].binding == Binding{2, 2});
}

TEST_CASE("ABT nogood naming an unknown agent asks for a link") {
  const auto x = testing::openInstance(3, 2);
  FakeNet net(x);
  AbtAgent a(1, 2, std::set<int>{}, std::set<int>{2});
  a.start(net);  // no higher links: opens with value 1
  REQUIRE(a.value() == 1);
  net.sent.clear();
  a.receive(Message::nogood(2, 1, {{0, 2}, {1, 1}}), false, net);
  REQUIRE_FALSE(net.sent.empty());
  CHECK(net.sent[0].kind == MessageKind::AddLink);
  CHECK(net.sent[0].recipient == 0);
  CHECK(a.view().at(0) == 2);
  CHECK(a.higherLinks() == std::set<int>{0});

  FakeNet other(x);
  AbtAgent top(0, 2, std::set<int>{}, std::set<int>{});
  top.start(other);
  top.receive(Message::addLink(1, 0), false, other);
  REQUIRE(other.sent.size() == 1);
  CHECK(other.sent[0].recipient == 1);
  CHECK(top.lowerLinks() == std::set<int>{1});
}

TEST_CASE("ABT backtrack sends the view conflict to the nearest culprit") {
  const auto x = exampleInstance();
  FakeNet net(x);
  AbtAgent a3(2, 3, 3);
  a3.receive(Message::ok(1, 2, 1), true, net);
  CHECK(net.sent.empty());  // deferred while the mailbox holds more
  a3.receive(Message::ok(0, 2, 1), false, net);
  REQUIRE(net.sent.size() == 1);
  CHECK(net.sent[0].kind == MessageKind::Nogood);
  CHECK(net.sent[0].recipient == 1);
  CHECK(net.sent[0].context == Nogood{{1, 1}});
  CHECK(net.book.loss(2) == 1);

  FakeNet net2(x);
  AbtAgent a2(1, 3, 3);
  a2.receive(Message::ok(0, 1, 2), false, net2);
  REQUIRE(net2.sent.size() == 1);
  CHECK(net2.sent[0].recipient == 0);
  CHECK(net2.sent[0].context == Nogood{{0, 2}});
}

TEST_CASE("ABT with an empty derived nogood stops") {
  auto x = exampleInstance();
  x.availability[0] = {false, false, false};
  FakeNet net(x);
  AbtAgent a1(0, 3, 3);
  a1.start(net);
  REQUIRE(net.sent.size() == 1);
  CHECK(net.sent[0].kind == MessageKind::Stop);
  CHECK(net.sent[0].reason == StopReason::Exhausted);
}

TEST_CASE("ABT ends the running example with BT(x1=2) from A2") {
  const auto r = solve(exampleInstance(), Algorithm::ABT);
  CHECK(r.outcome.status == RunStatus::NoSolution);
  REQUIRE(r.trace.size() == 9);
  CHECK(r.trace.back().kind == MessageKind::Nogood);
  CHECK(r.trace.back().sender == 1);
  CHECK(r.trace.back().context == Nogood{{0, 2}});
}

TEST_CASE("figure traces") {
  CHECK(lines(solve(exampleInstance(), Algorithm::SyncBT).trace) ==
        std::vector<std::string>{"M1 (OK?(x1=1)) 1→2", "M2 (OK?(x2=1)) 2→3", "M3 (BT(x2=1)) 3→2",
                                 "M4 (BT(x1=1)) 2→1", "M5 (OK?(x1=2)) 1→2", "M6 (BT(x1=2)) 2→1"});
  CHECK(lines(solve(exampleInstance(), Algorithm::ABT).trace) ==
        std::vector<std::string>{"M1 (OK?(x1=1)) 1→2", "M2 (OK?(x2=1)) 2→3", "M3 (OK?(x1=1)) 1→3",
                                 "M4 (BT(x2=1)) 3→2", "M5 (BT(x1=1)) 2→1", "M6 (OK?(x2=3)) 2→3",
                                 "M7 (OK?(x1=2)) 1→2", "M8 (OK?(x1=2)) 1→3", "M9 (BT(x1=2)) 2→1"});
}

TEST_CASE("completeness and soundness on every small pattern") {
  std::size_t runs = 0;
  testing::forEachPattern(4, 4, [&](const Instance& x) {
    const auto expect = bruteForceSolve(x);
    for (auto algo : {Algorithm::SyncBT, Algorithm::ABT})
      for (auto policy : {SchedulerPolicy::Priority, SchedulerPolicy::Random}) {
        SolveOptions o;
        o.world.policy = policy;
        o.world.schedulerSeed = runs;
        const auto r = solve(x, algo, o);
        ++runs;
        if (expect) {
          REQUIRE(r.outcome.status == RunStatus::Agreement);
          REQUIRE(isAgreement(x, *r.outcome.finalAssignment));
        } else {
          REQUIRE(r.outcome.status == RunStatus::NoSolution);
        }
      }
  });
  // 4 runs per pattern, 2^(n*d) patterns for each n, d in 1..4
  std::size_t expected = 0;
  for (int n = 1; n <= 4; ++n)
    for (int d = 1; d <= 4; ++d) expected += 4 * (std::size_t{1} << (n * d));
  CHECK(runs == expected);
}

TEST_CASE("completeness on random larger instances") {
  Rng rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    GenParams p;
    p.n = static_cast<int>(rng.uniformInt(2, 10));
    p.d = static_cast<int>(rng.uniformInt(1, 10));
    p.density = rng.uniform01() * 0.5;
    p.seed = rng.next();
    const auto x = generate(p);
    const auto expect = bruteForceSolve(x);
    for (auto algo : {Algorithm::SyncBT, Algorithm::ABT}) {
      SolveOptions o;
      o.world.policy = SchedulerPolicy::Random;
      o.world.schedulerSeed = p.seed;
      const auto r = solve(x, algo, o);
      REQUIRE(r.outcome.status ==
              (expect ? RunStatus::Agreement : RunStatus::NoSolution));
      if (expect) REQUIRE(r.outcome.finalAssignment->values.front() == expect);
    }
  }
}

TEST_CASE("every stored ABT nogood is implied by the instance") {
  std::uint64_t seed = 0;
  testing::forEachPattern(3, 3, [&](const Instance& x) {
    WorldConfig cfg;
    cfg.policy = SchedulerPolicy::Random;
    cfg.schedulerSeed = ++seed;
    World w(x, makeAgents(x, Algorithm::ABT), cfg);
    w.start();
    while (!w.halted() && !w.quiescent()) {
      w.step();
      for (int i = 0; i < x.n; ++i) {
        const auto& a = dynamic_cast<const AbtAgent&>(w.agent(i));
        for (const auto& ng : a.nogoods()) REQUIRE(nogoodImplied(x, ng));
      }
    }
    for (const auto& m : w.trace())
      if (m.kind == MessageKind::Nogood) REQUIRE(nogoodImplied(x, m.context));
  });
}

TEST_CASE("priority-order traces are stable across runs") {
  GenParams p;
  for (std::uint64_t s = 0; s < 30; ++s) {
    p.seed = s;
    const auto x = generate(p);
    for (auto algo : kAllAlgorithms)
      REQUIRE(emitTrace(solve(x, algo).trace) == emitTrace(solve(x, algo).trace));
  }
}

TEST_CASE("nogood revelations") {
  const auto x = exampleInstance();
  CHECK(revealedByNogood(x, 2, {{0, 1}, {1, 1}}) == std::vector<int>{1});
  CHECK(revealedByNogood(x, 1, {{0, 1}}).empty());
  CHECK(revealedByNogood(x, 1, {{0, 2}}) == std::vector<int>{2});
  CHECK(revealedByNogood(x, 2, {{0, 1}, {1, 3}}).empty());
  CHECK(revealedByNogood(x, 0, {}) == std::vector<int>{3});
  CHECK(parseAlgorithm("abtu") == Algorithm::ABTU);
  CHECK_THROWS_AS(parseAlgorithm("dfs"), std::invalid_argument);
}
