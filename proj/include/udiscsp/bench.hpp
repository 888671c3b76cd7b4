#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "udiscsp/generator.hpp"
#include "udiscsp/solvers.hpp"

namespace udiscsp {

struct RunMetrics {
  Algorithm algo = Algorithm::SyncBT;
  std::size_t densityIndex = 0;
  std::size_t instanceIndex = 0;
  std::uint64_t instanceSeed = 0;
  double density = 0.0;
  Distribution distribution = Distribution::Uniform;
  RunStatus status = RunStatus::StepLimit;
  double privacyLossPerAgent = 0.0;  // ledger mean over all n agents
  std::uint64_t messages = 0;
  std::uint64_t sends = 0;
  bool solved = false;
  bool interrupted = false;
  bool stepLimit = false;
  double wallTimeMs = 0.0;
};

struct SweepSpec {
  std::vector<double> densities{0.1, 0.2, 0.3, 0.4, 0.5};
  int instancesPerPoint = 50;
  std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
  GenParams base;  // density and seed are overwritten per instance
  std::uint64_t seed = 1;
  SchedulerPolicy policy = SchedulerPolicy::Random;
  std::optional<std::uint64_t> stepLimit;

  // Risk input. With neither learning flag set and offline mode, every run
  // sees the same snapshot and the runs are spread over worker threads.
  RiskSettings risk;
  bool learnBetweenRuns = false;
  bool perDensityStats = false;
  std::map<long, FutilityStats> densityStats;  // keyed by densityKey()

  bool deterministic = false;  // report wall time as 0
  unsigned threads = 0;        // 0: hardware concurrency
};

long densityKey(double density);

// The seeded parameters of one instance; shared by every algorithm.
GenParams instanceParams(const SweepSpec& spec, std::size_t densityIndex,
                         std::size_t instanceIndex);
std::uint64_t schedulerSeed(const SweepSpec& spec, std::size_t densityIndex,
                            std::size_t instanceIndex);

struct AggregateRow {
  Algorithm algo = Algorithm::SyncBT;
  double density = 0.0;
  Distribution distribution = Distribution::Uniform;
  int instances = 0;
  double privacyLossMean = 0.0;
  double messagesMean = 0.0;
  double solvedRate = 0.0;
  double interruptedRate = 0.0;
  double stepLimitRate = 0.0;
  double wallTimeMsMean = 0.0;
};

struct BatchResult {
  std::vector<RunMetrics> runs;  // density-major, then instance, then algorithm
  std::vector<AggregateRow> rows;
  FutilityStats stats;           // final global stats
  std::map<long, FutilityStats> densityStats;
};

BatchResult runBatch(const SweepSpec& spec);
std::vector<AggregateRow> aggregate(const std::vector<RunMetrics>& runs);

// Phase one of a learned-risk batch: runs the baseline solvers on the
// spec's instances and returns the spec with the observed stats installed.
SweepSpec learnRisk(SweepSpec spec);

inline constexpr std::string_view kCsvHeader =
    "algo,density,dist,instances,privacy_loss_mean,messages_mean,solved_rate,"
    "interrupted_rate,step_limit_rate,walltime_ms_mean";
std::string toCsv(const std::vector<AggregateRow>& rows);

// "lo:hi:step" or a comma list.
std::vector<double> parseDensities(std::string_view text);

struct OrderingCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  std::size_t pairedViolations = 0;  // paired instances where it fails
  std::size_t pairs = 0;
};

struct OrderingReport {
  std::vector<OrderingCheck> checks;
  double messageRatioAbtOverSyncBt = 0.0;
  bool allHold() const;
};

// Throws std::invalid_argument if the algorithms were not run on the
// same instance seeds.
OrderingReport compareAlgorithms(const std::vector<RunMetrics>& runs);

}  // namespace udiscsp
