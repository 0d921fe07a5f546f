#pragma once

#include <cmath>
#include <cstdint>

#include "qencost/errors.hpp"

namespace qencost {

enum class BudgetMode { OneQubitAbsolute, MultiAbsolute, MultiRelative };

inline const char* budget_mode_name(BudgetMode mode) {
  switch (mode) {
    case BudgetMode::OneQubitAbsolute: return "one-qubit-absolute";
    case BudgetMode::MultiAbsolute: return "absolute";
    case BudgetMode::MultiRelative: return "relative";
  }
  return "?";
}

struct RunBudget {
  double epsilon = 0.0;
  double delta = 0.0;
  int n = 1;
  BudgetMode mode = BudgetMode::MultiRelative;
  std::int64_t shots = 0;
};

// Hoeffding-style shot requirement before rounding. The one-qubit mode bounds
// the absolute estimation error of a single outcome probability; the multi
// modes add a union bound over the 2^n - 1 independent outcomes, and the
// relative mode additionally rescales the tolerance by the bin probability
// 1/2^n, which multiplies the count by 2^(2n).
inline double run_budget_raw(double epsilon, double delta, int n, BudgetMode mode) {
  if (!(epsilon > 0.0) || epsilon > 1.0) throw DomainError("epsilon must lie in (0, 1]");
  if (!(delta > 0.0) || delta > 1.0) throw DomainError("delta must lie in (0, 1]");
  if (n < 1) throw DomainError("qubit count must be positive");
  const double inv = 1.0 / (2.0 * epsilon * epsilon);
  switch (mode) {
    case BudgetMode::OneQubitAbsolute:
      return inv * std::log(2.0 / delta);
    case BudgetMode::MultiAbsolute:
      return inv * std::log(2.0 * (std::exp2(n) - 1.0) / delta);
    case BudgetMode::MultiRelative:
      return inv * std::exp2(2 * n) * std::log(2.0 * (std::exp2(n) - 1.0) / delta);
  }
  throw DomainError("unknown budget mode");
}

inline RunBudget run_budget(double epsilon, double delta, int n, BudgetMode mode) {
  const double raw = run_budget_raw(epsilon, delta, n, mode);
  if (!(raw < 9.2e18)) throw TooLarge("shot budget exceeds the 64-bit range");
  return RunBudget{epsilon, delta, n, mode, static_cast<std::int64_t>(std::ceil(raw))};
}

}  // namespace qencost
