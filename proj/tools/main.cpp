// udiscsp: generate meeting-scheduling instances, solve them, run sweeps.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "udiscsp/bench.hpp"
#include "udiscsp/generator.hpp"
#include "udiscsp/instance_io.hpp"
#include "udiscsp/solvers.hpp"

namespace fs = std::filesystem;
using namespace udiscsp;

namespace {

constexpr int kUsage = 1;
constexpr int kBadInstance = 2;

struct GenerateArgs {
  GenParams params;
  std::string dist = "uniform";
  std::string out;
};

struct SolveArgs {
  std::string algo = "abt";
  std::string instance;
  std::string scheduler = "priority";
  std::uint64_t schedSeed = 0;
  std::optional<std::uint64_t> stepLimit;
  bool trace = false;
  std::string riskMode = "offline";
  double riskDefault = kDefaultRisk;
  std::string stats;
};

struct BenchArgs {
  std::string densities = "0.1:0.5:0.1";
  int runs = 50;
  std::string dist = "uniform";
  std::uint64_t seed = 1;
  std::string out;
  int n = 10;
  int d = 10;
  Cost reward = 20;
  std::string scheduler = "random";
  unsigned threads = 0;
  bool deterministic = false;
  std::string stats;
  bool learn = false;
  bool perDensity = false;
  double riskDefault = kDefaultRisk;
};

int runGenerate(GenerateArgs& a) {
  a.params.distribution = parseDistribution(a.dist);
  const auto instance = generate(a.params);
  if (a.out.empty())
    std::cout << toJson(instance);
  else
    saveInstance(instance, a.out);
  return 0;
}

int runSolve(const SolveArgs& a) {
  const auto algo = parseAlgorithm(a.algo);
  SolveOptions options;
  options.world.policy = parseScheduler(a.scheduler);
  options.world.schedulerSeed = a.schedSeed;
  options.world.risk.mode = parseRiskMode(a.riskMode);
  options.world.risk.fallback = a.riskDefault;
  options.stepLimit = a.stepLimit;
  if (!a.stats.empty() && fs::exists(a.stats)) options.world.risk.stats = loadStats(a.stats);

  Instance instance;
  try {
    instance = loadInstance(a.instance);
  } catch (const FormatError& e) {
    std::cerr << "invalid instance file: " << e.what() << '\n';
    return kBadInstance;
  }

  const auto result = solve(instance, algo, options);
  const auto& o = result.outcome;
  if (a.trace) std::cout << emitTrace(result.trace);
  std::cout << "status: " << to_string(o.status) << '\n'
            << "messages: " << o.messages << '\n'
            << "steps: " << o.steps << '\n'
            << "privacy loss:";
  for (auto l : o.ledger.lossPerAgent()) std::cout << ' ' << l;
  std::cout << "\nprivacy loss mean: " << o.ledger.meanLoss() << '\n';
  if (o.finalAssignment) {
    std::cout << "assignment:";
    for (const auto& v : o.finalAssignment->values) std::cout << ' ' << *v;
    std::cout << '\n';
  }
  if (o.status == RunStatus::Interrupted)
    std::cout << "interrupted by: agent " << *o.stoppedBy + 1
              << " (estimated cost " << o.estimatedCost << ")\n";

  if (!a.stats.empty()) {
    const bool terminated =
        o.status == RunStatus::Agreement || o.status == RunStatus::NoSolution;
    const auto stats = options.world.risk.mode == RiskMode::Online
                           ? recordTermination(result.stats, o.sends, terminated)
                           : recordRun(options.world.risk.stats, o.sends, terminated);
    saveStats(stats, a.stats);
  }
  return 0;
}

int runBench(const BenchArgs& a) {
  SweepSpec spec;
  spec.densities = parseDensities(a.densities);
  spec.instancesPerPoint = a.runs;
  spec.base.n = a.n;
  spec.base.d = a.d;
  spec.base.reward = a.reward;
  spec.base.distribution = parseDistribution(a.dist);
  spec.seed = a.seed;
  spec.policy = parseScheduler(a.scheduler);
  spec.threads = a.threads;
  spec.deterministic = a.deterministic;
  spec.perDensityStats = a.perDensity;
  spec.risk.fallback = a.riskDefault;
  if (!a.stats.empty()) spec.risk.stats = loadStats(a.stats);
  if (a.learn) spec = learnRisk(spec);

  const auto result = runBatch(spec);
  const auto csv = toCsv(result.rows);
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + a.out + "'");
    out << csv;
  }
  const auto report = compareAlgorithms(result.runs);
  for (const auto& c : report.checks)
    std::cerr << (c.holds ? "ok   " : "FAIL ") << c.name << ": " << c.lhs << " vs " << c.rhs
              << " (" << c.pairedViolations << '/' << c.pairs << " paired violations)\n";
  std::cerr << "messages abt/syncbt: " << report.messageRatioAbtOverSyncBt << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Utilitarian distributed constraint satisfaction toolkit"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a random meeting-scheduling instance");
  g->add_option("--n", gen.params.n, "Agents")->check(CLI::PositiveNumber);
  g->add_option("--d", gen.params.d, "Values per domain")->check(CLI::PositiveNumber);
  g->add_option("--density", gen.params.density, "Probability a value is forbidden")
      ->check(CLI::Range(0.0, 1.0));
  g->add_option("--dist", gen.dist, "uniform | tail")->check(CLI::IsMember({"uniform", "tail"}));
  g->add_option("--seed", gen.params.seed, "Generator seed");
  g->add_option("--reward", gen.params.reward, "Reward per agent");
  g->add_option("--cost-max", gen.params.costMax, "Largest revelation cost");
  g->add_option("--out", gen.out, "Output file (stdout if omitted)");

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "Run one solver on an instance file");
  s->add_option("--algo", sol.algo, "syncbt | abt | syncbtu | abtu")
      ->check(CLI::IsMember({"syncbt", "abt", "syncbtu", "abtu"}));
  s->add_option("--instance", sol.instance, "Instance file")->required();
  s->add_option("--scheduler", sol.scheduler, "priority | random")
      ->check(CLI::IsMember({"priority", "random"}));
  s->add_option("--sched-seed", sol.schedSeed, "Seed of the random scheduler");
  s->add_option("--step-limit", sol.stepLimit, "Maximum deliveries (default 10000*n)");
  s->add_flag("--trace", sol.trace, "Print the message trace");
  s->add_option("--risk-mode", sol.riskMode, "offline | online")
      ->check(CLI::IsMember({"offline", "online"}));
  s->add_option("--risk-default", sol.riskDefault, "Risk before any observation")
      ->check(CLI::Range(0.0, 1.0));
  s->add_option("--stats", sol.stats, "Futility stats file, read and updated");

  BenchArgs ben;
  auto* b = app.add_subcommand("bench", "Run the density sweep and write aggregate CSV");
  b->add_option("--densities", ben.densities, "lo:hi:step or comma list");
  b->add_option("--runs", ben.runs, "Instances per density")->check(CLI::PositiveNumber);
  b->add_option("--dist", ben.dist, "uniform | tail")->check(CLI::IsMember({"uniform", "tail"}));
  b->add_option("--seed", ben.seed, "Base seed");
  b->add_option("--out", ben.out, "CSV file (stdout if omitted)");
  b->add_option("--n", ben.n, "Agents")->check(CLI::PositiveNumber);
  b->add_option("--d", ben.d, "Values per domain")->check(CLI::PositiveNumber);
  b->add_option("--reward", ben.reward, "Reward per agent");
  b->add_option("--scheduler", ben.scheduler, "priority | random")
      ->check(CLI::IsMember({"priority", "random"}));
  b->add_option("--threads", ben.threads, "Worker threads (0: all cores)");
  b->add_flag("--deterministic", ben.deterministic, "Report wall time as 0");
  b->add_option("--stats", ben.stats, "Futility stats file to start from");
  b->add_flag("--learn", ben.learn, "Learn the risk on baseline runs first");
  b->add_flag("--per-density", ben.perDensity, "Keep one stats bucket per density");
  b->add_option("--risk-default", ben.riskDefault, "Risk before any observation")
      ->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*g) return runGenerate(gen);
    if (*s) return runSolve(sol);
    if (*b) return runBench(ben);
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInstance;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
