#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qencost/circuit.hpp"
#include "qencost/errors.hpp"
#include "qencost/state_vector.hpp"

namespace qencost {

enum class BoundaryRule { Periodic, Outlet };
enum class FlowDirection { Positive, Negative };

// One-dimensional advection of a bit-encoded field at unit Courant number,
// run through a hidden-string readout circuit: the field becomes the
// oracle's code, a SWAP network between oracle and final mixing layer moves
// the code, and a single measurement returns the advected field.
struct AdvectionProblem {
  std::string field_bits;  // d bits per grid value, concatenated
  int d = 1;               // bits per value
  int k = 0;               // time steps
  FlowDirection direction = FlowDirection::Positive;
  BoundaryRule bc = BoundaryRule::Periodic;
  double cfl = 1.0;
  // The input-independent network swaps every adjacent pair; the
  // field-specific network skips pairs whose tracked bits already agree.
  bool full_network = true;
};

inline void validate_advection_problem(const AdvectionProblem& problem) {
  if (problem.field_bits.empty()) throw DomainError("field must hold at least one bit");
  for (char c : problem.field_bits) {
    if (c != '0' && c != '1') throw DomainError("field bits must be '0' or '1'");
  }
  if (problem.d < 1) throw DomainError("bits per value must be positive");
  if (problem.field_bits.size() % static_cast<std::size_t>(problem.d) != 0) {
    throw WidthMismatch("field length must be a multiple of the bits per value");
  }
  if (problem.k < 0) throw DomainError("step count must be non-negative");
  if (problem.cfl != 1.0) {
    throw DomainError(
        "only a Courant number of exactly 1 is supported: the wire-permutation "
        "update moves the field by whole cells, so fractional transport has no "
        "circuit realization here");
  }
}

// Oracle over field-length + 1 qubits: one CX from each '1' position into
// the final (phase) qubit.
inline Circuit build_bv_oracle(const std::string& code) {
  for (char c : code) {
    if (c != '0' && c != '1') throw DomainError("code bits must be '0' or '1'");
  }
  const int length = static_cast<int>(code.size());
  Circuit oracle(length + 1);
  for (int i = 0; i < length; ++i) {
    if (code[static_cast<std::size_t>(i)] == '1') oracle.push(GateOp::cx(i, length));
  }
  return oracle;
}

// Classical reference: one time step moves the field by one whole cell.
inline std::string classical_advect_step(const std::string& field, int d,
                                         FlowDirection direction, BoundaryRule bc) {
  const std::size_t width = static_cast<std::size_t>(d);
  std::string next;
  if (direction == FlowDirection::Positive) {
    const std::string incoming = bc == BoundaryRule::Periodic
                                     ? field.substr(field.size() - width)
                                     : std::string(width, '0');
    next = incoming + field.substr(0, field.size() - width);
  } else {
    const std::string incoming =
        bc == BoundaryRule::Periodic ? field.substr(0, width) : std::string(width, '0');
    next = field.substr(width) + incoming;
  }
  return next;
}

namespace detail {

// One single-position rotation of the code wires. In outlet mode the bit
// about to cross the boundary is first erased by a second CX into the
// phase qubit (cancelling its oracle CX), so the wrap carries a zero.
inline void emit_roll(Circuit& circuit, std::string& tracked, const AdvectionProblem& problem) {
  const int length = static_cast<int>(tracked.size());
  const bool forward = problem.direction == FlowDirection::Positive;
  if (problem.bc == BoundaryRule::Outlet) {
    const int exit_position = forward ? length - 1 : 0;
    if (tracked[static_cast<std::size_t>(exit_position)] == '1') {
      circuit.push(GateOp::cx(exit_position, length));
      tracked[static_cast<std::size_t>(exit_position)] = '0';
    }
  }
  // The chain bubbles the wrap bit through every pair, so in the
  // field-specific mode each pair is compared against that carried bit,
  // not against its neighbour's pre-roll value.
  const char carried =
      tracked[static_cast<std::size_t>(forward ? length - 1 : 0)];
  const auto maybe_swap = [&](int stationary, int a, int b) {
    if (problem.full_network || tracked[static_cast<std::size_t>(stationary)] != carried) {
      circuit.push(GateOp::swap(a, b));
    }
  };
  if (forward) {
    for (int p = length - 2; p >= 0; --p) maybe_swap(p, p, p + 1);
    std::rotate(tracked.rbegin(), tracked.rbegin() + 1, tracked.rend());
  } else {
    for (int p = 0; p <= length - 2; ++p) maybe_swap(p + 1, p, p + 1);
    std::rotate(tracked.begin(), tracked.begin() + 1, tracked.end());
  }
}

}  // namespace detail

// Full readout circuit: phase qubit prepared in |->, mixing layers around
// the oracle, and the shift network (d bit-rotations per step) inserted
// before the closing mixing layer.
inline Circuit advect_circuit(const AdvectionProblem& problem) {
  validate_advection_problem(problem);
  const int length = static_cast<int>(problem.field_bits.size());
  Circuit circuit(length + 1);
  circuit.push(GateOp::x(length));
  for (int q = 0; q <= length; ++q) circuit.push(GateOp::h(q));
  circuit.append(build_bv_oracle(problem.field_bits));

  std::string tracked = problem.field_bits;
  for (int step = 0; step < problem.k; ++step) {
    for (int roll = 0; roll < problem.d; ++roll) detail::emit_roll(circuit, tracked, problem);
  }
  // Closing the sandwich on the phase qubit as well returns it to |1>, so
  // the full state lands on a single basis vector.
  for (int q = 0; q <= length; ++q) circuit.push(GateOp::h(q));
  return circuit;
}

struct AdvectionReport {
  std::string initial_field;
  std::string final_field;               // single-shot quantum readout
  std::vector<std::string> step_fields;  // classical trajectory, k+1 entries
  Circuit circuit{1};
  double peak_probability = 0.0;
};

// Runs the circuit densely and reads the code register off the dominant
// basis state; the dynamics make that state carry all the probability mass.
inline AdvectionReport advect(const AdvectionProblem& problem) {
  AdvectionReport report;
  report.initial_field = problem.field_bits;
  report.circuit = advect_circuit(problem);
  report.step_fields.push_back(problem.field_bits);
  for (int step = 0; step < problem.k; ++step) {
    report.step_fields.push_back(
        classical_advect_step(report.step_fields.back(), problem.d, problem.direction,
                              problem.bc));
  }

  const int length = static_cast<int>(problem.field_bits.size());
  StateVector state(length + 1, 0);
  state.apply(report.circuit);
  std::uint64_t best = 0;
  double best_probability = -1.0;
  for (std::uint64_t index = 0; index < state.dim(); ++index) {
    if (state.probability(index) > best_probability) {
      best_probability = state.probability(index);
      best = index;
    }
  }
  report.peak_probability = best_probability;
  std::string readout(static_cast<std::size_t>(length), '0');
  for (int q = 0; q < length; ++q) {
    if (best & (std::uint64_t{1} << (length - q))) readout[static_cast<std::size_t>(q)] = '1';
  }
  report.final_field = readout;
  return report;
}

}  // namespace qencost
