#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "udiscsp/instance.hpp"

namespace udiscsp {

enum class Distribution { Uniform, TailConstrained };

std::string_view to_string(Distribution d);
Distribution parseDistribution(std::string_view s);  // "uniform" | "tail"

struct GenParams {
  int n = 10;
  int d = 10;
  double density = 0.3;  // per (agent, value) probability of being forbidden
  Distribution distribution = Distribution::Uniform;
  Cost costMin = 0;
  Cost costMax = 9;
  Cost reward = 20;
  std::uint64_t seed = 0;
};

// Forbidden probability for one agent: tail-constrained splits the agents
// into a top half at density/2 and the rest at 3*density/2.
double rowDensity(const GenParams& p, int agent);

// Draw order is row-major: for each (agent, value) one availability draw,
// then one cost draw. Throws std::invalid_argument on bad parameters.
Instance generate(const GenParams& params);

// Smallest value available to every agent.
std::optional<int> bruteForceSolve(const Instance& instance);

}  // namespace udiscsp
