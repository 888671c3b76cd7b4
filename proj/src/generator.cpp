#include "udiscsp/generator.hpp"

#include <stdexcept>
#include <string>

#include "udiscsp/rng.hpp"

namespace udiscsp {

std::string_view to_string(Distribution d) {
  return d == Distribution::Uniform ? "uniform" : "tail";
}

Distribution parseDistribution(std::string_view s) {
  if (s == "uniform") return Distribution::Uniform;
  if (s == "tail" || s == "tail-constrained") return Distribution::TailConstrained;
  throw std::invalid_argument("unknown distribution '" + std::string(s) + "'");
}

double rowDensity(const GenParams& p, int agent) {
  if (p.distribution == Distribution::Uniform) return p.density;
  return agent < p.n / 2 ? p.density / 2.0 : 1.5 * p.density;
}

Instance generate(const GenParams& p) {
  if (p.n <= 0 || p.d <= 0) throw std::invalid_argument("n and d must be positive");
  if (!(p.density >= 0.0 && p.density <= 1.0))
    throw std::invalid_argument("density must lie in [0,1]");
  if (p.distribution == Distribution::TailConstrained && 1.5 * p.density > 1.0)
    throw std::invalid_argument("tail-constrained needs 1.5*density <= 1");
  if (p.costMin < 0 || p.costMin > p.costMax)
    throw std::invalid_argument("bad cost range");
  if (p.reward < 0) throw std::invalid_argument("reward must be nonnegative");

  Rng rng(p.seed);
  Instance x;
  x.n = p.n;
  x.d = p.d;
  x.availability.assign(p.n, std::vector<bool>(p.d, true));
  x.costs.assign(p.n, std::vector<Cost>(p.d, 0));
  x.rewards.assign(p.n, p.reward);
  for (int i = 0; i < p.n; ++i) {
    const double q = rowDensity(p, i);
    for (int j = 0; j < p.d; ++j) {
      x.availability[i][j] = !rng.bernoulli(q);
      x.costs[i][j] = rng.uniformInt(p.costMin, p.costMax);
    }
  }
  return x;
}

std::optional<int> bruteForceSolve(const Instance& instance) {
  for (int v = 1; v <= instance.d; ++v) {
    bool all = true;
    for (int i = 0; i < instance.n && all; ++i) all = instance.available(i, v);
    if (all) return v;
  }
  return std::nullopt;
}

}  // namespace udiscsp
