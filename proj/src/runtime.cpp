#include "udiscsp/runtime.hpp"

#include <sstream>
#include <stdexcept>
#include <string>

namespace udiscsp {

Message Message::ok(int from, int to, int value, std::vector<Binding> cpa) {
  Message m;
  m.kind = MessageKind::Ok;
  m.sender = from;
  m.recipient = to;
  m.binding = {from, value};
  m.context = std::move(cpa);
  return m;
}

Message Message::nogood(int from, int to, std::vector<Binding> nogood) {
  Message m;
  m.kind = MessageKind::Nogood;
  m.sender = from;
  m.recipient = to;
  for (const auto& b : nogood)
    if (b.agent == to) m.binding = b;
  m.context = std::move(nogood);
  return m;
}

Message Message::addLink(int from, int to) {
  Message m;
  m.kind = MessageKind::AddLink;
  m.sender = from;
  m.recipient = to;
  m.binding = {from, 0};
  return m;
}

Message Message::stop(int from, StopReason reason, double estimatedCost) {
  Message m;
  m.kind = MessageKind::Stop;
  m.sender = from;
  m.recipient = from;
  m.reason = reason;
  m.estimatedCost = estimatedCost;
  return m;
}

std::string_view to_string(SchedulerPolicy p) {
  return p == SchedulerPolicy::Priority ? "priority" : "random";
}

SchedulerPolicy parseScheduler(std::string_view s) {
  if (s == "priority") return SchedulerPolicy::Priority;
  if (s == "random") return SchedulerPolicy::Random;
  throw std::invalid_argument("unknown scheduler '" + std::string(s) + "'");
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Agreement: return "agreement";
    case RunStatus::NoSolution: return "no-solution";
    case RunStatus::Interrupted: return "interrupted";
    case RunStatus::StepLimit: return "step-limit";
  }
  return "?";
}

World::World(Instance instance, std::vector<std::unique_ptr<Agent>> agents,
             WorldConfig config)
    : instance_(std::move(instance)),
      agents_(std::move(agents)),
      config_(config),
      ledger_(instance_.n, instance_.d),
      schedRng_(config.schedulerSeed),
      riskSnapshot_(udiscsp::futilityRisk(config.risk.stats, config.risk.fallback)),
      mailboxSize_(instance_.n, 0) {
  if (agents_.size() != static_cast<std::size_t>(instance_.n))
    throw std::invalid_argument("World: one agent per variable expected");
}

double World::futilityRisk() const {
  if (config_.risk.mode == RiskMode::Online)
    return udiscsp::futilityRisk(config_.risk.stats, config_.risk.fallback);
  return riskSnapshot_;
}

std::size_t World::pending(int agent) const { return mailboxSize_.at(agent); }

void World::start() {
  if (started_) return;
  started_ = true;
  for (auto& a : agents_) {
    if (halted()) break;
    a->start(*this);
  }
}

void World::send(Message m) {
  if (halted()) return;
  if (m.kind == MessageKind::Stop) {
    stop_ = std::move(m);
    return;
  }
  if (m.sender == m.recipient || m.sender < 0 || m.recipient < 0 ||
      m.sender >= instance_.n || m.recipient >= instance_.n)
    throw std::invalid_argument("send: bad endpoints");
  if (m.kind == MessageKind::Ok && (m.binding.value < 1 || m.binding.value > instance_.d))
    throw std::invalid_argument("send: Ok? value out of range");
  ++sent_;
  if (m.kind == MessageKind::Ok || m.kind == MessageKind::Nogood) {
    ++okNogoodSent_;
    if (config_.risk.mode == RiskMode::Online)
      config_.risk.stats = recordSend(config_.risk.stats);
  }
  ++mailboxSize_[m.recipient];
  ++inFlight_;
  const Channel ch{m.sender, m.recipient};
  channels_[ch].push_back({++seq_, std::move(m)});
}

World::Channel World::pickChannel() {
  if (config_.policy == SchedulerPolicy::Random) {
    const auto k = static_cast<std::int64_t>(channels_.size());
    auto it = channels_.begin();
    std::advance(it, schedRng_.uniformInt(0, k - 1));
    return it->first;
  }
  auto oldest = channels_.begin();
  for (auto it = channels_.begin(); it != channels_.end(); ++it)
    if (it->second.front().seq < oldest->second.front().seq) oldest = it;
  const int r = oldest->first.second;
  Channel best = oldest->first;
  for (const auto& [ch, q] : channels_)
    if (ch.second == r && ch.first > best.first) best = ch;
  return best;
}

void World::step() {
  if (quiescent()) throw std::logic_error("step: no message in flight");
  if (halted()) throw std::logic_error("step: run already stopped");
  const Channel ch = pickChannel();
  auto q = channels_.find(ch);
  Message m = std::move(q->second.front().msg);
  q->second.pop_front();
  if (q->second.empty()) channels_.erase(q);
  --inFlight_;
  const int r = m.recipient;
  --mailboxSize_[r];
  ++steps_;
  trace_.push_back(m);
  agents_[r]->receive(trace_.back(), mailboxSize_[r] > 0, *this);
}

Outcome World::runToCompletion(std::uint64_t stepLimit) {
  start();
  while (!halted() && !quiescent() && steps_ < stepLimit) step();

  Outcome out;
  out.ledger = ledger_;
  out.messages = trace_.size();
  out.steps = steps_;
  out.sends = okNogoodSent_;
  if (halted()) {
    out.stoppedBy = stop_->sender;
    if (stop_->reason == StopReason::Exhausted) {
      out.status = RunStatus::NoSolution;
    } else {
      out.status = RunStatus::Interrupted;
      out.estimatedCost = stop_->estimatedCost;
    }
    return out;
  }
  out.status = RunStatus::StepLimit;
  if (!quiescent()) return out;
  Assignment a;
  bool consistent = true;
  for (const auto& agent : agents_) {
    a.values.push_back(agent->value());
    consistent = consistent && agent->locallyConsistent(instance_);
  }
  // Quiescence without a true agreement would be a solver bug; it is
  // reported as step-limit rather than passed off as a solution.
  if (consistent && a.complete() && isAgreement(instance_, a)) {
    out.status = RunStatus::Agreement;
    out.finalAssignment = std::move(a);
  }
  return out;
}

std::uint64_t defaultStepLimit(const Instance& instance) {
  return 10000ULL * static_cast<std::uint64_t>(std::max(instance.n, 1));
}

std::string formatMessage(const Message& m, std::size_t index) {
  std::ostringstream out;
  out << 'M' << index << " (";
  switch (m.kind) {
    case MessageKind::Ok:
      out << "OK?(x" << m.binding.agent + 1 << '=' << m.binding.value << ')';
      break;
    case MessageKind::Nogood:
      out << "BT(x" << m.binding.agent + 1 << '=' << m.binding.value << ')';
      break;
    case MessageKind::AddLink:
      out << "ADDLINK(x" << m.binding.agent + 1 << ')';
      break;
    case MessageKind::Stop:
      out << "STOP(" << (m.reason == StopReason::Interrupted ? "interrupted" : "exhausted")
          << ')';
      break;
  }
  out << ") " << m.sender + 1 << "→" << m.recipient + 1;
  return out.str();
}

std::string emitTrace(std::span<const Message> trace) {
  std::string out;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out += formatMessage(trace[k], k + 1);
    out += '\n';
  }
  return out;
}

}  // namespace udiscsp
