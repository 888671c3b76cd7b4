#pragma once

#include <cstdint>
#include <random>

namespace udiscsp {

// std::mt19937_64 is fully specified by the standard, but the standard
// distributions are not, so the transforms below are written out by hand
// to keep instances identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) from the top 53 bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi], rejection sampled (no modulo bias).
  std::int64_t uniformInt(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t deriveSeed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace udiscsp
