#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qencost/errors.hpp"
#include "qencost/rational.hpp"
#include "qencost/rng.hpp"
#include "qencost/shot_budget.hpp"

namespace qencost {

struct StudyConfig {
  int n = 1;
  std::string epsilon = "0.1";  // decimal text, compared exactly
  std::string delta = "0.5";
  std::int64_t factor = 100;  // experiments = ceil(factor / delta)
  std::uint64_t seed = 0;
  std::optional<std::int64_t> shot_override;  // defaults to the relative budget
};

struct StudyResult {
  int n = 1;
  std::uint64_t n_tilde = 2;
  std::int64_t shots = 0;
  std::int64_t experiments = 0;
  std::int64_t outliers = 0;
  std::string epsilon;
  std::string delta;
  std::uint64_t seed = 0;
};

// Samples the uniform distribution over 2^n outcomes `shots` times per
// experiment and counts experiments where any observed frequency k/N lands
// outside the band 1/2^n +- epsilon/2^n. The check is exact: with epsilon
// = p/q, bin k violates the band iff |2^n k - N| * q >= p * N, so a
// frequency exactly on the band edge counts as a violation. An epsilon of
// at least 1 widens the band past every observable frequency and flags
// nothing.
inline StudyResult outlier_study(const StudyConfig& config) {
  if (config.n < 1 || config.n > 30) throw DomainError("register size must lie in [1, 30]");
  if (config.factor < 1) throw DomainError("repetition factor must be at least 1");
  const Rational epsilon = parse_decimal(config.epsilon);
  const Rational delta = parse_decimal(config.delta);
  if (!(epsilon > 0) || epsilon > 1) throw DomainError("epsilon must lie in (0, 1]");
  if (!(delta > 0) || delta > 1) throw DomainError("delta must lie in (0, 1]");

  const std::uint64_t n_tilde = std::uint64_t{1} << config.n;
  std::int64_t shots = 0;
  if (config.shot_override) {
    shots = *config.shot_override;
    if (shots < 1) throw DomainError("shot count must be at least 1");
  } else {
    shots = run_budget(to_double(epsilon), to_double(delta), config.n, BudgetMode::MultiRelative)
                .shots;
  }

  const BigInt experiments_exact =
      (BigInt(config.factor) * denominator(delta) + numerator(delta) - 1) / numerator(delta);
  if (experiments_exact > 1'000'000'000) throw TooLarge("experiment count exceeds 1e9");
  const auto experiments = experiments_exact.convert_to<std::int64_t>();

  StudyResult result{config.n, n_tilde, shots,          experiments,
                     0,        config.epsilon, config.delta, config.seed};
  if (epsilon >= 1) return result;

  const BigInt band_num = numerator(epsilon) * shots;
  const BigInt band_den = denominator(epsilon);
  std::vector<std::int64_t> counts(n_tilde);
  for (std::int64_t e = 0; e < experiments; ++e) {
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(e)));
    std::fill(counts.begin(), counts.end(), 0);
    for (std::int64_t s = 0; s < shots; ++s) ++counts[rng.next_below(n_tilde)];
    for (std::uint64_t i = 0; i < n_tilde; ++i) {
      BigInt deviation = BigInt(n_tilde) * counts[i] - shots;
      if (deviation < 0) deviation = -deviation;
      if (deviation * band_den >= band_num) {
        ++result.outliers;
        break;
      }
    }
  }
  return result;
}

struct ProbeRecord {
  std::int64_t shots = 0;
  std::int64_t outliers = 0;
  std::int64_t experiments = 0;
  bool passed = false;
};

struct MinShotsResult {
  int n = 1;
  std::int64_t shots = 0;  // smallest passing shot count encountered
  std::int64_t bound = 0;  // highest outlier count that still passes
  std::vector<ProbeRecord> probes;
  bool monotone_consistent = true;
  std::string epsilon;
  std::string delta;
  std::uint64_t seed = 0;
};

// Finds the smallest shot count whose outlier study stays at or below
// `factor` outliers: geometric expansion by doubling from 1, then integer
// bisection between the last failure and the first success. Every probe
// runs a fresh study under a derived sub-seed, so the pass boundary is
// statistical; the full probe record ships with the result and any probe
// pair where more shots fared worse than fewer clears the monotone flag.
inline MinShotsResult min_shots_search(int n, const std::string& epsilon,
                                       const std::string& delta, std::int64_t factor,
                                       std::uint64_t seed, std::int64_t cap = 10'000'000) {
  if (cap < 1) throw DomainError("shot cap must be at least 1");
  MinShotsResult result;
  result.n = n;
  result.bound = factor;
  result.epsilon = epsilon;
  result.delta = delta;
  result.seed = seed;

  std::uint64_t probe_index = 0;
  const auto probe = [&](std::int64_t shots) {
    StudyConfig config;
    config.n = n;
    config.epsilon = epsilon;
    config.delta = delta;
    config.factor = factor;
    config.seed = derive_seed(seed, probe_index++);
    config.shot_override = shots;
    const StudyResult study = outlier_study(config);
    const bool passed = study.outliers <= factor;
    result.probes.push_back(ProbeRecord{shots, study.outliers, study.experiments, passed});
    return passed;
  };

  std::int64_t lo = 0;  // largest failing shot count (0 while none failed)
  std::int64_t hi = 0;  // smallest passing shot count
  for (std::int64_t shots = 1;; shots = std::min(shots * 2, cap)) {
    if (probe(shots)) {
      hi = shots;
      break;
    }
    lo = shots;
    if (shots == cap) {
      throw BudgetExceeded("no passing shot count found up to " + std::to_string(cap));
    }
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (probe(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  result.shots = hi;

  for (const ProbeRecord& fewer : result.probes) {
    for (const ProbeRecord& more : result.probes) {
      if (fewer.shots < more.shots && fewer.passed && !more.passed) {
        result.monotone_consistent = false;
      }
    }
  }
  return result;
}

}  // namespace qencost
