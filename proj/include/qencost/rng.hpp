#pragma once

#include <cstdint>
#include <random>

#include "qencost/errors.hpp"

namespace qencost {

// Output function of the splitmix64 generator. Used as a stateless mixer.
inline std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// The (stream+1)-th splitmix64 output for initial state `seed`. Gives every
// experiment/probe its own decorrelated generator while staying a pure
// function of (seed, stream).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

// Seedable generator with platform-independent output. std::mt19937_64 has a
// fully specified algorithm, so sequences are reproducible across compilers;
// the std::*_distribution adapters are not, which is why uniform draws are
// built directly from the raw 64-bit stream below.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound), exact via rejection of the biased tail.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw DomainError("next_below: bound must be positive");
    const std::uint64_t threshold = (-bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace qencost
