#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qencost/errors.hpp"

namespace qencost {

enum class GateKind { Rx, Ry, Rz, X, H, Cx, Mcx, Swap, Reset };

inline constexpr int kGateKindCount = 9;

inline bool is_rotation(GateKind k) {
  return k == GateKind::Rx || k == GateKind::Ry || k == GateKind::Rz;
}

// Gates the branch simulator can track (classical-reversible plus Reset).
inline bool is_classical(GateKind k) {
  return k == GateKind::X || k == GateKind::Cx || k == GateKind::Mcx ||
         k == GateKind::Swap || k == GateKind::Reset;
}

inline const char* kind_name(GateKind k) {
  switch (k) {
    case GateKind::Rx: return "RX";
    case GateKind::Ry: return "RY";
    case GateKind::Rz: return "RZ";
    case GateKind::X: return "X";
    case GateKind::H: return "H";
    case GateKind::Cx: return "CX";
    case GateKind::Mcx: return "MCX";
    case GateKind::Swap: return "SWAP";
    case GateKind::Reset: return "RESET";
  }
  return "?";
}

// A control qubit with its polarity: closed fires on |1>, open on |0>.
struct ControlBit {
  int qubit = 0;
  bool closed = true;
};

struct GateOp {
  GateKind kind = GateKind::X;
  std::vector<int> targets;
  std::vector<ControlBit> controls;
  double angle = 0.0;

  static GateOp rx(int q, double a) { return {GateKind::Rx, {q}, {}, a}; }
  static GateOp ry(int q, double a) { return {GateKind::Ry, {q}, {}, a}; }
  static GateOp rz(int q, double a) { return {GateKind::Rz, {q}, {}, a}; }
  static GateOp x(int q) { return {GateKind::X, {q}, {}, 0.0}; }
  static GateOp h(int q) { return {GateKind::H, {q}, {}, 0.0}; }
  static GateOp cx(int control, int target) {
    return {GateKind::Cx, {target}, {ControlBit{control, true}}, 0.0};
  }
  static GateOp mcx(std::vector<ControlBit> ctrls, int target) {
    return {GateKind::Mcx, {target}, std::move(ctrls), 0.0};
  }
  static GateOp swap(int a, int b) { return {GateKind::Swap, {a, b}, {}, 0.0}; }
  static GateOp reset(int q) { return {GateKind::Reset, {q}, {}, 0.0}; }

  // Every qubit the gate touches, targets first.
  std::vector<int> qubits() const {
    std::vector<int> qs = targets;
    for (const ControlBit& c : controls) qs.push_back(c.qubit);
    return qs;
  }
};

// Structural checks shared by the simulators: arity per kind, index ranges,
// and pairwise-distinct qubits.
inline void validate_gate(const GateOp& op, int num_qubits) {
  std::size_t want_targets = 1;
  bool allow_controls = false;
  switch (op.kind) {
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz:
    case GateKind::X:
    case GateKind::H:
      allow_controls = true;
      break;
    case GateKind::Cx:
      if (op.controls.size() != 1)
        throw IndexOutOfRange("CX requires exactly one control");
      allow_controls = true;
      break;
    case GateKind::Mcx:
      if (op.controls.empty())
        throw IndexOutOfRange("MCX requires at least one control");
      allow_controls = true;
      break;
    case GateKind::Swap:
      want_targets = 2;
      allow_controls = true;
      break;
    case GateKind::Reset:
      break;
  }
  if (op.targets.size() != want_targets)
    throw IndexOutOfRange(std::string(kind_name(op.kind)) + ": wrong target count");
  if (!allow_controls && !op.controls.empty())
    throw IndexOutOfRange(std::string(kind_name(op.kind)) + ": controls not supported");

  const std::vector<int> qs = op.qubits();
  for (int q : qs) {
    if (q < 0 || q >= num_qubits)
      throw IndexOutOfRange("qubit index " + std::to_string(q) + " out of range for " +
                            std::to_string(num_qubits) + " qubits");
  }
  for (std::size_t i = 0; i < qs.size(); ++i)
    for (std::size_t j = i + 1; j < qs.size(); ++j)
      if (qs[i] == qs[j])
        throw IndexOutOfRange("duplicate qubit " + std::to_string(qs[i]) + " in " +
                              kind_name(op.kind));
}

}  // namespace qencost
