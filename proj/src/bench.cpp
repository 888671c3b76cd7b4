#include "udiscsp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>

#include "udiscsp/rng.hpp"

namespace udiscsp {

namespace {

constexpr std::uint64_t kSchedulerSalt = 0x5eedc0ffee15bad5ULL;

struct Job {
  std::size_t k;  // density index
  std::size_t i;  // instance index
  Algorithm algo;
};

RunMetrics runOne(const SweepSpec& spec, const Instance& instance, const Job& job,
                  const RiskSettings& risk, FutilityStats* statsOut) {
  SolveOptions options;
  options.world.policy = spec.policy;
  options.world.schedulerSeed = schedulerSeed(spec, job.k, job.i);
  options.world.risk = risk;
  options.stepLimit = spec.stepLimit;

  const auto t0 = std::chrono::steady_clock::now();
  auto result = solve(instance, job.algo, options);
  const auto t1 = std::chrono::steady_clock::now();

  const auto& o = result.outcome;
  RunMetrics m;
  m.algo = job.algo;
  m.densityIndex = job.k;
  m.instanceIndex = job.i;
  m.instanceSeed = instanceParams(spec, job.k, job.i).seed;
  m.density = spec.densities[job.k];
  m.distribution = spec.base.distribution;
  m.status = o.status;
  m.privacyLossPerAgent = o.ledger.meanLoss();
  m.messages = o.messages;
  m.sends = o.sends;
  m.solved = o.status == RunStatus::Agreement;
  m.interrupted = o.status == RunStatus::Interrupted;
  m.stepLimit = o.status == RunStatus::StepLimit;
  m.wallTimeMs = spec.deterministic
                     ? 0.0
                     : std::chrono::duration<double, std::milli>(t1 - t0).count();
  if (statsOut) {
    const bool terminated =
        o.status == RunStatus::Agreement || o.status == RunStatus::NoSolution;
    *statsOut = risk.mode == RiskMode::Online
                    ? recordTermination(result.stats, o.sends, terminated)
                    : recordRun(risk.stats, o.sends, terminated);
  }
  return m;
}

}  // namespace

long densityKey(double density) { return std::lround(density * 1000.0); }

GenParams instanceParams(const SweepSpec& spec, std::size_t k, std::size_t i) {
  GenParams p = spec.base;
  p.density = spec.densities.at(k);
  p.seed = deriveSeed(spec.seed, k, i);
  return p;
}

std::uint64_t schedulerSeed(const SweepSpec& spec, std::size_t k, std::size_t i) {
  return deriveSeed(spec.seed ^ kSchedulerSalt, k, i);
}

BatchResult runBatch(const SweepSpec& spec) {
  if (spec.instancesPerPoint < 1) throw std::invalid_argument("instancesPerPoint must be >= 1");
  if (spec.algorithms.empty()) throw std::invalid_argument("no algorithms selected");

  const auto nd = spec.densities.size();
  const auto ni = static_cast<std::size_t>(spec.instancesPerPoint);
  std::vector<Instance> instances;
  instances.reserve(nd * ni);
  for (std::size_t k = 0; k < nd; ++k)
    for (std::size_t i = 0; i < ni; ++i) instances.push_back(generate(instanceParams(spec, k, i)));

  std::vector<Job> jobs;
  for (std::size_t k = 0; k < nd; ++k)
    for (std::size_t i = 0; i < ni; ++i)
      for (auto a : spec.algorithms) jobs.push_back({k, i, a});

  BatchResult out;
  out.runs.resize(jobs.size());
  out.stats = spec.risk.stats;
  out.densityStats = spec.densityStats;

  auto bucket = [&](std::size_t k) -> FutilityStats& {
    if (!spec.perDensityStats) return out.stats;
    return out.densityStats[densityKey(spec.densities[k])];
  };

  const bool sequential = spec.learnBetweenRuns || spec.risk.mode == RiskMode::Online;
  if (sequential) {
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      const auto& job = jobs[j];
      FutilityStats& stats = bucket(job.k);
      RiskSettings risk{spec.risk.mode, stats, spec.risk.fallback};
      out.runs[j] = runOne(spec, instances[job.k * ni + job.i], job, risk, &stats);
    }
  } else {
    std::vector<RiskSettings> risks;
    for (std::size_t k = 0; k < nd; ++k) risks.push_back({spec.risk.mode, bucket(k), spec.risk.fallback});
    unsigned workers = spec.threads ? spec.threads : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
        const auto& job = jobs[j];
        out.runs[j] = runOne(spec, instances[job.k * ni + job.i], job, risks[job.k], nullptr);
      }
    };
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  out.rows = aggregate(out.runs);
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<RunMetrics>& runs) {
  std::vector<AggregateRow> rows;
  std::map<std::pair<std::size_t, Algorithm>, std::size_t> index;
  for (const auto& r : runs) {
    auto [it, fresh] = index.try_emplace({r.densityIndex, r.algo}, rows.size());
    if (fresh) {
      AggregateRow row;
      row.algo = r.algo;
      row.density = r.density;
      row.distribution = r.distribution;
      rows.push_back(row);
    }
    auto& row = rows[it->second];
    ++row.instances;
    row.privacyLossMean += r.privacyLossPerAgent;
    row.messagesMean += static_cast<double>(r.messages);
    row.solvedRate += r.solved;
    row.interruptedRate += r.interrupted;
    row.stepLimitRate += r.stepLimit;
    row.wallTimeMsMean += r.wallTimeMs;
  }
  for (auto& row : rows) {
    const double c = row.instances;
    row.privacyLossMean /= c;
    row.messagesMean /= c;
    row.solvedRate /= c;
    row.interruptedRate /= c;
    row.stepLimitRate /= c;
    row.wallTimeMsMean /= c;
  }
  return rows;
}

SweepSpec learnRisk(SweepSpec spec) {
  SweepSpec phase = spec;
  phase.algorithms = {Algorithm::SyncBT, Algorithm::ABT};
  phase.risk.mode = RiskMode::Offline;
  phase.learnBetweenRuns = true;
  const auto learned = runBatch(phase);
  spec.risk.stats = learned.stats;
  spec.densityStats = learned.densityStats;
  spec.learnBetweenRuns = false;
  return spec;
}

std::string toCsv(const std::vector<AggregateRow>& rows) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.algo) << ',' << std::setprecision(6) << r.density << ','
        << to_string(r.distribution) << ',' << r.instances << std::fixed << std::setprecision(6)
        << ',' << r.privacyLossMean << ',' << r.messagesMean << ',' << r.solvedRate << ','
        << r.interruptedRate << ',' << r.stepLimitRate << ',' << std::setprecision(3)
        << r.wallTimeMsMean << '\n';
    out.unsetf(std::ios::fixed);
  }
  return out.str();
}

std::vector<double> parseDensities(std::string_view text) {
  const std::string s(text);
  std::vector<double> out;
  auto number = [&](const std::string& tok) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || tok.empty())
      throw std::invalid_argument("bad density '" + tok + "'");
    return v;
  };
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw std::invalid_argument("densities must be lo:hi:step");
    const double lo = number(parts[0]), hi = number(parts[1]), step = number(parts[2]);
    if (step <= 0 || hi < lo) throw std::invalid_argument("bad density range '" + s + "'");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(std::round((lo + k * step) * 1e9) / 1e9);
  } else {
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
  }
  for (double d : out)
    if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument("density outside [0,1]");
  if (out.empty()) throw std::invalid_argument("no densities");
  return out;
}

bool OrderingReport::allHold() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.holds; });
}

OrderingReport compareAlgorithms(const std::vector<RunMetrics>& runs) {
  using Key = std::tuple<std::size_t, std::size_t, std::uint64_t>;
  std::map<Algorithm, std::map<Key, const RunMetrics*>> by;
  for (const auto& r : runs) by[r.algo][{r.densityIndex, r.instanceIndex, r.instanceSeed}] = &r;
  for (auto a : kAllAlgorithms)
    if (!by.count(a)) throw std::invalid_argument("missing results for " + std::string(to_string(a)));
  const auto& reference = by.at(Algorithm::SyncBT);
  for (const auto& [a, m] : by) {
    if (m.size() != reference.size())
      throw std::invalid_argument("mismatched seed sets");
    for (const auto& [k, _] : reference)
      if (!m.count(k)) throw std::invalid_argument("mismatched seed sets");
  }

  auto mean = [&](Algorithm a, auto field) {
    double s = 0;
    for (const auto& [k, r] : by.at(a)) s += field(*r);
    return s / static_cast<double>(reference.size());
  };
  auto loss = [](const RunMetrics& r) { return r.privacyLossPerAgent; };
  auto msgs = [](const RunMetrics& r) { return static_cast<double>(r.messages); };

  OrderingReport report;
  auto check = [&](std::string name, Algorithm lo, Algorithm hi, auto field, bool strict) {
    OrderingCheck c;
    c.name = std::move(name);
    c.lhs = mean(lo, field);
    c.rhs = mean(hi, field);
    c.holds = strict ? c.lhs < c.rhs : c.lhs <= c.rhs;
    for (const auto& [k, r] : by.at(lo)) {
      ++c.pairs;
      if (field(*r) > field(*by.at(hi).at(k))) ++c.pairedViolations;
    }
    report.checks.push_back(std::move(c));
  };
  check("privacy syncbtu <= syncbt", Algorithm::SyncBTU, Algorithm::SyncBT, loss, false);
  check("privacy abtu <= abt", Algorithm::ABTU, Algorithm::ABT, loss, false);
  check("privacy syncbt <= abt", Algorithm::SyncBT, Algorithm::ABT, loss, false);
  check("messages syncbt < abt", Algorithm::SyncBT, Algorithm::ABT, msgs, true);
  const double sync = mean(Algorithm::SyncBT, msgs);
  report.messageRatioAbtOverSyncBt =
      sync > 0 ? mean(Algorithm::ABT, msgs) / sync : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace udiscsp
