#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "udiscsp/instance.hpp"
#include "udiscsp/rng.hpp"
#include "udiscsp/utility.hpp"

namespace udiscsp {

struct Binding {
  int agent = 0;
  int value = 0;
  friend auto operator<=>(const Binding&, const Binding&) = default;
};

enum class MessageKind { Ok, Nogood, AddLink, Stop };
enum class StopReason { Interrupted, Exhausted };

// Ok?:     binding = (sender, value); context = the sender's partial
//          assignment when the protocol ships one (SyncBT's CPA).
// Nogood:  context = the nogood, sorted by agent; binding = the
//          recipient's pair inside it.
// AddLink: binding.agent = requesting variable.
// Stop:    reason; estimatedCost is set for interruptions.
struct Message {
  MessageKind kind = MessageKind::Ok;
  int sender = 0;
  int recipient = 0;
  Binding binding{};
  std::vector<Binding> context;
  StopReason reason = StopReason::Exhausted;
  double estimatedCost = 0.0;

  static Message ok(int from, int to, int value, std::vector<Binding> cpa = {});
  static Message nogood(int from, int to, std::vector<Binding> nogood);
  static Message addLink(int from, int to);
  static Message stop(int from, StopReason reason, double estimatedCost = 0.0);
};

// What a running agent can see of the world.
class Network {
 public:
  virtual ~Network() = default;
  virtual void send(Message m) = 0;
  virtual const Instance& instance() const = 0;
  virtual PrivacyLedger& ledger() = 0;
  virtual double futilityRisk() const = 0;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual void start(Network& net) = 0;
  // `morePending` is true while further messages wait in this agent's
  // mailbox, so a handler may defer work until the batch is drained.
  virtual void receive(const Message& m, bool morePending, Network& net) = 0;
  virtual std::optional<int> value() const = 0;
  virtual bool locallyConsistent(const Instance& instance) const = 0;
};

enum class SchedulerPolicy { Priority, Random };
std::string_view to_string(SchedulerPolicy p);
SchedulerPolicy parseScheduler(std::string_view s);

enum class RunStatus { Agreement, NoSolution, Interrupted, StepLimit };
std::string_view to_string(RunStatus s);

struct Outcome {
  RunStatus status = RunStatus::StepLimit;
  std::optional<Assignment> finalAssignment;
  PrivacyLedger ledger;
  std::uint64_t messages = 0;  // delivered messages, one trace line each
  std::uint64_t steps = 0;
  std::uint64_t sends = 0;     // Ok?/Nogood messages sent
  std::optional<int> stoppedBy;
  double estimatedCost = 0.0;  // of the interrupting agent
};

struct RiskSettings {
  RiskMode mode = RiskMode::Offline;
  FutilityStats stats;
  double fallback = kDefaultRisk;
};

struct WorldConfig {
  SchedulerPolicy policy = SchedulerPolicy::Priority;
  std::uint64_t schedulerSeed = 0;
  RiskSettings risk;
};

// Single-threaded simulator. Per-channel FIFO; the priority policy serves
// the mailbox holding the oldest message in flight and, inside it, the
// nearest (lowest-priority) sender first. The random policy picks a
// nonempty channel uniformly.
class World final : public Network {
 public:
  World(Instance instance, std::vector<std::unique_ptr<Agent>> agents,
        WorldConfig config = {});

  void start();
  bool quiescent() const { return inFlight_ == 0; }
  bool halted() const { return stop_.has_value(); }
  void step();
  Outcome runToCompletion(std::uint64_t stepLimit);

  void send(Message m) override;
  const Instance& instance() const override { return instance_; }
  PrivacyLedger& ledger() override { return ledger_; }
  const PrivacyLedger& ledger() const { return ledger_; }
  double futilityRisk() const override;

  const std::vector<Message>& trace() const { return trace_; }
  const FutilityStats& stats() const { return config_.risk.stats; }
  std::uint64_t messagesEnqueued() const { return sent_; }
  std::uint64_t steps() const { return steps_; }
  std::size_t pending(int agent) const;
  const Agent& agent(int i) const { return *agents_.at(i); }

 private:
  struct Queued {
    std::uint64_t seq;
    Message msg;
  };
  using Channel = std::pair<int, int>;  // (sender, recipient)

  Channel pickChannel();

  Instance instance_;
  std::vector<std::unique_ptr<Agent>> agents_;
  WorldConfig config_;
  PrivacyLedger ledger_;
  Rng schedRng_;
  double riskSnapshot_;
  std::map<Channel, std::deque<Queued>> channels_;
  std::vector<std::size_t> mailboxSize_;
  std::size_t inFlight_ = 0;
  std::uint64_t seq_ = 0;
  std::uint64_t sent_ = 0;
  std::uint64_t okNogoodSent_ = 0;
  std::uint64_t steps_ = 0;
  std::vector<Message> trace_;
  std::optional<Message> stop_;
  bool started_ = false;
};

std::uint64_t defaultStepLimit(const Instance& instance);

std::string formatMessage(const Message& m, std::size_t index);
// One line per delivered message: `M_k (KIND(x_i=v)) s→r`, 1-based.
std::string emitTrace(std::span<const Message> trace);
inline std::string emitTrace(const World& w) { return emitTrace(w.trace()); }

}  // namespace udiscsp
