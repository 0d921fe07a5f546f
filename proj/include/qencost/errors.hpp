#pragma once

#include <stdexcept>
#include <string>

namespace qencost {

// Common base so callers can catch every toolkit error with one handler.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IndexOutOfRange : Error {
  using Error::Error;
};

// Dense simulation request above the configured qubit cap.
struct QubitLimitExceeded : Error {
  using Error::Error;
};

struct NotPowerOfTwo : Error {
  using Error::Error;
};

struct UnnormalizedTarget : Error {
  using Error::Error;
};

// Reset on a qubit that is not deterministically |0> or |1> across the
// nonzero amplitudes. A reset there would destroy the superposition.
struct ResetOnSuperposedQubit : Error {
  using Error::Error;
};

// Rotation/H requested on the branch simulator, which only tracks
// classical-reversible gates.
struct NonClassicalGateOnBranch : Error {
  using Error::Error;
};

// Parameter outside its documented domain (epsilon, delta, n, ...).
struct DomainError : Error {
  using Error::Error;
};

struct DegenerateData : Error {
  using Error::Error;
};

// Interval search walked past its configured cap without a passing N.
struct BudgetExceeded : Error {
  using Error::Error;
};

// Brute-force enumeration would exceed the configured size cap.
struct TooLarge : Error {
  using Error::Error;
};

struct WidthMismatch : Error {
  using Error::Error;
};

struct NonFiniteValue : Error {
  using Error::Error;
};

struct ValueOutOfRange : Error {
  using Error::Error;
};

// Collision requested on a stencil offset whose data the validity cascade
// has already invalidated.
struct StaleDataRegion : Error {
  using Error::Error;
};

// More time steps requested than ancilla sub-blocks were allocated for.
struct AncillaExhausted : Error {
  using Error::Error;
};

}  // namespace qencost
