#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include "qencost/gates.hpp"

namespace qencost {

struct Circuit {
  int num_qubits = 0;
  std::vector<GateOp> gates;

  Circuit() = default;
  explicit Circuit(int n) : num_qubits(n) {}

  void push(GateOp op) {
    validate_gate(op, num_qubits);
    gates.push_back(std::move(op));
  }

  void append(const Circuit& other) {
    for (const GateOp& g : other.gates) push(g);
  }

  std::size_t size() const { return gates.size(); }
};

// Rebuild a circuit on a wider register, sending local qubit i to
// qubit_map[i]. Used to place synthesized sub-circuits into block layouts.
inline Circuit remap_circuit(const Circuit& c, const std::vector<int>& qubit_map,
                             int new_num_qubits) {
  Circuit out(new_num_qubits);
  for (const GateOp& g : c.gates) {
    GateOp moved = g;
    for (int& t : moved.targets) t = qubit_map.at(static_cast<std::size_t>(t));
    for (ControlBit& cb : moved.controls)
      cb.qubit = qubit_map.at(static_cast<std::size_t>(cb.qubit));
    out.push(std::move(moved));
  }
  return out;
}

// ASAP layer index (0-based) per gate: each gate enters the earliest layer
// after every earlier gate that shares one of its qubits.
inline std::vector<int> asap_layers(const Circuit& c) {
  std::vector<int> next_free(static_cast<std::size_t>(c.num_qubits), 0);
  std::vector<int> layer;
  layer.reserve(c.gates.size());
  for (const GateOp& g : c.gates) {
    int l = 0;
    for (int q : g.qubits()) l = std::max(l, next_free[static_cast<std::size_t>(q)]);
    layer.push_back(l);
    for (int q : g.qubits()) next_free[static_cast<std::size_t>(q)] = l + 1;
  }
  return layer;
}

// Layer counts from ASAP scheduling. A layer counts toward a kind when it
// contains at least one gate of that kind, so a mixed layer can contribute
// to several kinds.
struct DepthReport {
  int total = 0;
  std::array<int, kGateKindCount> per_kind{};
  int rotation = 0;  // layers holding at least one Rx/Ry/Rz
  int cx = 0;        // layers holding at least one CX

  int of_kind(GateKind k) const { return per_kind[static_cast<std::size_t>(k)]; }
};

inline DepthReport depth_profile(const Circuit& c) {
  const std::vector<int> layers = asap_layers(c);
  DepthReport report;
  if (layers.empty()) return report;
  report.total = *std::max_element(layers.begin(), layers.end()) + 1;

  const std::size_t n_layers = static_cast<std::size_t>(report.total);
  std::vector<std::array<bool, kGateKindCount>> has(n_layers, std::array<bool, kGateKindCount>{});
  std::vector<bool> has_rotation(n_layers, false);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto l = static_cast<std::size_t>(layers[i]);
    const GateKind k = c.gates[i].kind;
    has[l][static_cast<std::size_t>(k)] = true;
    if (is_rotation(k)) has_rotation[l] = true;
  }
  for (std::size_t l = 0; l < n_layers; ++l) {
    for (int k = 0; k < kGateKindCount; ++k)
      if (has[l][static_cast<std::size_t>(k)]) ++report.per_kind[static_cast<std::size_t>(k)];
    if (has_rotation[l]) ++report.rotation;
  }
  report.cx = report.of_kind(GateKind::Cx);
  return report;
}

inline int depth(const Circuit& c) { return depth_profile(c).total; }

}  // namespace qencost
