#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace kmjack {

// Seed used by the CLI when none is given; documented in the README so runs
// are reproducible by default.
inline constexpr std::uint64_t kDefaultSeed = 123456789;

// SplitMix64 output function (stateless form), used for stream derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives the seed of an independent substream from a master seed and a path
// of indices (study, cell, pass, replication, ...). Replications can then run
// on any thread in any order without touching each other's stream.
inline std::uint64_t derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t part : path) h = mix64(h ^ mix64(part));
  return h;
}

// Random variate source. All samplers are written against uniform01() so a
// given seed produces the same sequence on every platform (mt19937_64 output
// is fully specified by the standard; std::*_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform on the open interval (0,1)
  double uniform01() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double exponential(double rate) { return -std::log(uniform01()) / rate; }

  double normal_std();
  double normal(double mean, double sd) { return mean + sd * normal_std(); }
  double lognormal(double meanlog, double sdlog) {
    return std::exp(normal(meanlog, sdlog));
  }

  double weibull(double shape, double scale) {
    return scale * std::pow(-std::log(uniform01()), 1.0 / shape);
  }

  // Marsaglia-Tsang squeeze method; exact for all shape > 0.
  double gamma(double shape, double rate);

 private:
  std::mt19937_64 eng_;
};

}  // namespace kmjack
