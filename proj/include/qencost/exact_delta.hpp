#pragma once

#include <cstdint>
#include <vector>

#include "qencost/errors.hpp"
#include "qencost/rational.hpp"

namespace qencost {

// Occupation numbers of the excitation levels s in [-j, j]: occupations[s+j]
// bins received exactly z+s of the N = z*n_tilde draws.
struct ExcitationConfig {
  int j = 0;
  std::int64_t z = 1;
  std::vector<std::int64_t> occupations;

  std::int64_t occupation(int level) const { return occupations[static_cast<std::size_t>(level + j)]; }
};

namespace detail {

inline BigInt factorial(std::int64_t k) {
  BigInt value = 1;
  for (std::int64_t i = 2; i <= k; ++i) value *= i;
  return value;
}

inline BigInt integer_pow(BigInt base, std::int64_t exponent) {
  BigInt value = 1;
  for (std::int64_t i = 0; i < exponent; ++i) value *= base;
  return value;
}

}  // namespace detail

// Maximal excitation level: the largest j with j/z <= epsilon, never past z
// so that occupied levels keep non-negative draw counts.
inline int max_excitation_level(std::int64_t z, const Rational& epsilon) {
  const BigInt scaled = (BigInt(z) * numerator(epsilon)) / denominator(epsilon);
  BigInt j = scaled < z ? scaled : BigInt(z);
  return j.convert_to<int>();
}

// All occupation vectors with total n_tilde and zero net excitation, in
// lexicographic order over (v_{-j}, ..., v_j). Each is generated once.
inline std::vector<ExcitationConfig> enumerate_configs(std::uint64_t n_tilde, std::int64_t z,
                                                       const Rational& epsilon) {
  if (n_tilde < 2) throw DomainError("outcome count must be at least 2");
  if (z < 1) throw DomainError("runs-per-outcome factor must be at least 1");
  if (!(epsilon > 0) || !(epsilon < 1)) throw DomainError("epsilon must lie in (0, 1)");

  const int j = max_excitation_level(z, epsilon);
  const int levels = 2 * j + 1;
  std::vector<ExcitationConfig> configs;
  std::vector<std::int64_t> occupations(static_cast<std::size_t>(levels), 0);

  const auto descend = [&](const auto& self, int index, std::int64_t remaining,
                           std::int64_t net) -> void {
    if (index == levels - 1) {
      // The last level is forced by the total; accept it iff the net
      // excitation cancels.
      const int level = levels - 1 - j;
      if (net + static_cast<std::int64_t>(level) * remaining == 0) {
        occupations[static_cast<std::size_t>(index)] = remaining;
        configs.push_back(ExcitationConfig{j, z, occupations});
      }
      return;
    }
    const int level = index - j;
    for (std::int64_t v = 0; v <= remaining; ++v) {
      occupations[static_cast<std::size_t>(index)] = v;
      self(self, index + 1, remaining - v, net + static_cast<std::int64_t>(level) * v);
    }
    occupations[static_cast<std::size_t>(index)] = 0;
  };
  descend(descend, 0, static_cast<std::int64_t>(n_tilde), 0);
  return configs;
}

struct DeltaExactReport {
  std::uint64_t n_tilde = 2;
  std::int64_t z = 1;
  Rational epsilon;
  int j = 0;
  std::vector<ExcitationConfig> configs;
  Rational value;  // success probability 1 - delta
};

// Success probability of the uniform readout within the closed error band
// of half-width epsilon/n_tilde, for N = z*n_tilde draws: each valid
// occupation vector contributes the number of draw sequences realizing it,
// multinomial(N; z+s repeated v_s times) * multinomial(n_tilde; v), over
// the n_tilde^N equally likely sequences. All arithmetic is exact.
inline DeltaExactReport delta_exact(std::uint64_t n_tilde, std::int64_t z,
                                    const Rational& epsilon) {
  DeltaExactReport report;
  report.n_tilde = n_tilde;
  report.z = z;
  report.epsilon = epsilon;
  report.configs = enumerate_configs(n_tilde, z, epsilon);
  report.j = max_excitation_level(z, epsilon);

  const std::int64_t shots = z * static_cast<std::int64_t>(n_tilde);
  const BigInt shots_factorial = detail::factorial(shots);
  const BigInt bins_factorial = detail::factorial(static_cast<std::int64_t>(n_tilde));

  BigInt favorable = 0;
  for (const ExcitationConfig& config : report.configs) {
    BigInt sequence_ways = shots_factorial;
    BigInt assignment_ways = bins_factorial;
    for (int level = -config.j; level <= config.j; ++level) {
      const std::int64_t occupation = config.occupation(level);
      if (occupation == 0) continue;
      sequence_ways /= detail::integer_pow(detail::factorial(z + level), occupation);
      assignment_ways /= detail::factorial(occupation);
    }
    favorable += sequence_ways * assignment_ways;
  }
  report.value = Rational(favorable) / Rational(detail::integer_pow(BigInt(n_tilde), shots));
  return report;
}

// Independent oracle: walks every one of the n_tilde^N draw sequences and
// counts those whose per-outcome tallies k_i all satisfy
// |n_tilde*k_i - N| * den(eps) <= num(eps) * N. Any N is accepted.
inline Rational delta_bruteforce(std::uint64_t n_tilde, std::int64_t shots,
                                 const Rational& epsilon, std::int64_t cap = 10'000'000) {
  if (n_tilde < 2) throw DomainError("outcome count must be at least 2");
  if (shots < 1) throw DomainError("shot count must be at least 1");
  if (!(epsilon > 0) || !(epsilon < 1)) throw DomainError("epsilon must lie in (0, 1)");
  const BigInt total = detail::integer_pow(BigInt(n_tilde), shots);
  if (total > cap) throw TooLarge("sequence count exceeds the cap of " + std::to_string(cap));

  const BigInt band = numerator(epsilon) * shots;
  const BigInt scale = denominator(epsilon);
  std::vector<std::int64_t> counts(n_tilde, 0);
  std::int64_t favorable = 0;

  const auto walk = [&](const auto& self, std::int64_t position) -> void {
    if (position == shots) {
      for (std::uint64_t i = 0; i < n_tilde; ++i) {
        BigInt deviation = BigInt(n_tilde) * counts[i] - shots;
        if (deviation < 0) deviation = -deviation;
        if (deviation * scale > band) return;
      }
      ++favorable;
      return;
    }
    for (std::uint64_t outcome = 0; outcome < n_tilde; ++outcome) {
      ++counts[outcome];
      self(self, position + 1);
      --counts[outcome];
    }
  };
  walk(walk, 0);
  return Rational(favorable) / Rational(total);
}

}  // namespace qencost
