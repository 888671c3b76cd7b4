#include "udiscsp/solvers.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>

namespace udiscsp {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::SyncBT: return "syncbt";
    case Algorithm::ABT: return "abt";
    case Algorithm::SyncBTU: return "syncbtu";
    case Algorithm::ABTU: return "abtu";
  }
  return "?";
}

Algorithm parseAlgorithm(std::string_view s) {
  for (auto a : kAllAlgorithms)
    if (to_string(a) == s) return a;
  throw std::invalid_argument("unknown algorithm '" + std::string(s) + "'");
}

bool usesUtility(Algorithm a) { return a == Algorithm::SyncBTU || a == Algorithm::ABTU; }

std::vector<int> revealedByNogood(const Instance& instance, int agent, const Nogood& ng) {
  std::vector<int> out;
  if (ng.empty()) {
    for (int v = 1; v <= instance.d; ++v)
      if (!instance.available(agent, v)) out.push_back(v);
    return out;
  }
  const int v = ng.front().value;
  const bool shared = std::all_of(ng.begin(), ng.end(),
                                  [v](const Binding& b) { return b.value == v; });
  if (shared && !instance.available(agent, v)) out.push_back(v);
  return out;
}

bool UtilityGuard::allows(Network& net, int agent, std::span<const int> revealedNow) const {
  if (!enabled_) return true;
  const auto& instance = net.instance();
  const auto& ledger = net.ledger();
  std::vector<int> fresh;
  for (int v : revealedNow)
    if (!ledger.revealed(agent, v)) fresh.push_back(v);
  if (fresh.empty()) return true;
  const auto order = unrevealedOrder(instance, ledger, agent, fresh);
  const auto decision = decideContinue(instance, ledger, net.futilityRisk(), order,
                                       instance.rewards.at(agent), agent);
  if (decision.verdict == Verdict::Continue) return true;
  net.send(Message::stop(agent, StopReason::Interrupted, decision.estimatedCost));
  return false;
}

namespace {

void chargeAll(Network& net, int agent, std::span<const int> values) {
  for (int v : values) net.ledger().charge(net.instance(), agent, v);
}

}  // namespace

// ---------------------------------------------------------------- SyncBT

SyncBtAgent::SyncBtAgent(int id, int n, int d, UtilityGuard guard)
    : id_(id), n_(n), d_(d), guard_(guard), tried_(d + 1, false) {}

void SyncBtAgent::start(Network& net) {
  if (id_ == 0) assign(net);
}

void SyncBtAgent::receive(const Message& m, bool, Network& net) {
  switch (m.kind) {
    case MessageKind::Ok:
      cpa_ = m.context;
      std::fill(tried_.begin(), tried_.end(), false);
      value_.reset();
      assign(net);
      break;
    case MessageKind::Nogood:
      if (value_) tried_[*value_] = true;
      value_.reset();
      assign(net);
      break;
    case MessageKind::AddLink:
    case MessageKind::Stop:
      break;
  }
}

bool SyncBtAgent::locallyConsistent(const Instance& instance) const {
  if (!value_ || !instance.available(id_, *value_)) return false;
  return std::all_of(cpa_.begin(), cpa_.end(),
                     [this](const Binding& b) { return b.value == *value_; });
}

void SyncBtAgent::assign(Network& net) {
  const auto& instance = net.instance();
  for (int v = 1; v <= d_; ++v) {
    if (tried_[v] || !instance.available(id_, v)) continue;
    if (!std::all_of(cpa_.begin(), cpa_.end(), [v](const Binding& b) { return b.value == v; }))
      continue;
    if (id_ == n_ - 1) {
      // Completing the CPA is the agreement itself; there is no one left
      // to send to.
      value_ = v;
      net.ledger().charge(instance, id_, v);
      return;
    }
    const int revealed[] = {v};
    if (!guard_.allows(net, id_, revealed)) return;
    value_ = v;
    net.ledger().charge(instance, id_, v);
    auto next = cpa_;
    next.push_back({id_, v});
    net.send(Message::ok(id_, id_ + 1, v, std::move(next)));
    return;
  }
  backtrack(net);
}

void SyncBtAgent::backtrack(Network& net) {
  const auto& instance = net.instance();
  value_.reset();
  if (id_ == 0) {
    chargeAll(net, id_, revealedByNogood(instance, id_, {}));
    net.send(Message::stop(id_, StopReason::Exhausted));
    return;
  }
  const auto revealed = revealedByNogood(instance, id_, cpa_);
  if (!guard_.allows(net, id_, revealed)) return;
  chargeAll(net, id_, revealed);
  net.send(Message::nogood(id_, id_ - 1, cpa_));
}

// ------------------------------------------------------------------- ABT

namespace {

std::set<int> range(int lo, int hi) {
  std::set<int> s;
  for (int i = lo; i < hi; ++i) s.insert(i);
  return s;
}

}  // namespace

AbtAgent::AbtAgent(int id, int n, int d, UtilityGuard guard)
    : AbtAgent(id, d, range(0, id), range(id + 1, n), guard) {}

AbtAgent::AbtAgent(int id, int d, std::set<int> higherLinks, std::set<int> lowerLinks,
                   UtilityGuard guard)
    : id_(id), d_(d), guard_(guard), higher_(std::move(higherLinks)),
      lower_(std::move(lowerLinks)) {}

void AbtAgent::start(Network& net) {
  // Only agents with nobody above them open the search; the others stay
  // quiet until the first Ok? reaches them.
  if (higher_.empty()) checkAgentView(net, true);
}

bool AbtAgent::matchesView(const Nogood& ng) const {
  for (const auto& b : ng) {
    if (b.agent == id_) continue;
    auto it = view_.find(b.agent);
    if (it != view_.end() && it->second != b.value) return false;
  }
  return true;
}

bool AbtAgent::applies(const Nogood& ng, int v) const {
  bool mentionsSelf = false;
  for (const auto& b : ng) {
    if (b.agent == id_) {
      if (b.value != v) return false;
      mentionsSelf = true;
      continue;
    }
    auto it = view_.find(b.agent);
    if (it == view_.end() || it->second != b.value) return false;
  }
  return mentionsSelf;
}

bool AbtAgent::consistent(const Instance& instance, int v) const {
  if (!instance.available(id_, v)) return false;
  for (const auto& [j, x] : view_)
    if (x != v) return false;
  return std::none_of(store_.begin(), store_.end(),
                      [&](const Nogood& ng) { return applies(ng, v); });
}

bool AbtAgent::locallyConsistent(const Instance& instance) const {
  return current_ && consistent(instance, *current_);
}

// The reason value v is ruled out. An empty reason (a stored nogood on v
// alone) wins; otherwise the reason blaming the nearest agents, then the
// smallest one.
Nogood AbtAgent::explanation(int v) const {
  std::vector<Nogood> candidates;
  for (const auto& [j, x] : view_)
    if (x != v) candidates.push_back({{j, x}});
  for (const auto& ng : store_) {
    if (!applies(ng, v)) continue;
    Nogood rest;
    for (const auto& b : ng)
      if (b.agent != id_) rest.push_back(b);
    candidates.push_back(std::move(rest));
  }
  auto key = [](const Nogood& e) {
    return std::make_tuple(!e.empty(), e.empty() ? 0 : -e.front().agent, e.size(), e);
  };
  return *std::min_element(candidates.begin(), candidates.end(),
                           [&](const Nogood& a, const Nogood& b) { return key(a) < key(b); });
}

void AbtAgent::checkAgentView(Network& net, bool triggered) {
  if (stopped_) return;
  const auto& instance = net.instance();
  if (current_ && consistent(instance, *current_)) return;
  if (!current_ && !triggered) return;
  for (int v = 1; v <= d_; ++v) {
    if (!consistent(instance, v)) continue;
    current_ = v;
    const int revealed[] = {v};
    if (!guard_.allows(net, id_, revealed)) {
      stopped_ = true;
      return;
    }
    net.ledger().charge(instance, id_, v);
    for (int r : lower_) net.send(Message::ok(id_, r, v));
    return;
  }
  backtrack(net);
}

void AbtAgent::backtrack(Network& net) {
  const auto& instance = net.instance();
  std::map<int, int> merged;
  for (int v = 1; v <= d_; ++v) {
    if (!instance.available(id_, v)) continue;
    for (const auto& b : explanation(v)) merged[b.agent] = b.value;
  }
  Nogood ng;
  for (const auto& [a, x] : merged) ng.push_back({a, x});
  if (ng.empty()) {
    chargeAll(net, id_, revealedByNogood(instance, id_, ng));
    stopped_ = true;
    net.send(Message::stop(id_, StopReason::Exhausted));
    return;
  }
  const auto revealed = revealedByNogood(instance, id_, ng);
  if (!guard_.allows(net, id_, revealed)) {
    stopped_ = true;
    return;
  }
  chargeAll(net, id_, revealed);
  const int culprit = ng.back().agent;
  net.send(Message::nogood(id_, culprit, ng));
  view_.erase(culprit);
  checkAgentView(net, false);
}

void AbtAgent::receive(const Message& m, bool morePending, Network& net) {
  if (stopped_) return;
  if (!inBatch_) {
    inBatch_ = true;
    batchStartValue_ = current_;
    nogoodSenders_.clear();
  }
  switch (m.kind) {
    case MessageKind::Ok: {
      higher_.insert(m.sender);
      view_[m.sender] = m.binding.value;
      std::erase_if(store_, [this](const Nogood& ng) { return !matchesView(ng); });
      break;
    }
    case MessageKind::Nogood: {
      const Nogood& ng = m.context;
      const bool aboutMe = current_ && m.binding.agent == id_ && m.binding.value == *current_;
      if (aboutMe && matchesView(ng)) {
        for (const auto& b : ng) {
          if (b.agent == id_ || view_.count(b.agent)) continue;
          if (!higher_.count(b.agent)) {
            higher_.insert(b.agent);
            net.send(Message::addLink(id_, b.agent));
          }
          view_[b.agent] = b.value;
        }
        if (std::find(store_.begin(), store_.end(), ng) == store_.end()) store_.push_back(ng);
        nogoodSenders_.push_back(m.sender);
      } else if (aboutMe) {
        nogoodSenders_.push_back(m.sender);
      }
      break;
    }
    case MessageKind::AddLink:
      lower_.insert(m.sender);
      if (current_) net.send(Message::ok(id_, m.sender, *current_));
      break;
    case MessageKind::Stop:
      break;
  }
  if (morePending) return;

  inBatch_ = false;
  checkAgentView(net, true);
  if (stopped_ || !current_ || current_ != batchStartValue_) return;
  // The value survived the nogoods, so their senders are working from a
  // stale view; remind them.
  for (int s : nogoodSenders_) net.send(Message::ok(id_, s, *current_));
}

// ----------------------------------------------------------------- glue

std::vector<std::unique_ptr<Agent>> makeAgents(const Instance& instance, Algorithm algo) {
  std::vector<std::unique_ptr<Agent>> agents;
  const UtilityGuard guard(usesUtility(algo));
  for (int i = 0; i < instance.n; ++i) {
    if (algo == Algorithm::SyncBT || algo == Algorithm::SyncBTU)
      agents.push_back(std::make_unique<SyncBtAgent>(i, instance.n, instance.d, guard));
    else
      agents.push_back(std::make_unique<AbtAgent>(i, instance.n, instance.d, guard));
  }
  return agents;
}

SolveResult solve(const Instance& instance, Algorithm algo, const SolveOptions& options) {
  World world(instance, makeAgents(instance, algo), options.world);
  auto outcome = world.runToCompletion(options.stepLimit.value_or(defaultStepLimit(instance)));
  return {std::move(outcome), world.trace(), world.stats()};
}

}  // namespace udiscsp
