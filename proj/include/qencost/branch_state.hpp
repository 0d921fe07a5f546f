#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qencost/errors.hpp"
#include "qencost/gates.hpp"
#include "qencost/state_vector.hpp"

namespace qencost {

// Sparse simulator for states of the form sum_i a_i |i>|bits_i>: a dense
// amplitude per top-register value, one classical bitstring for the bottom
// register. Classical-reversible gates act branch-wise on the bitstrings;
// anything that would create superposition inside a branch is rejected.
class BranchState {
 public:
  BranchState(int top_qubits, int bottom_qubits)
      : top_qubits_(top_qubits), bottom_qubits_(bottom_qubits) {
    if (top_qubits < 0 || bottom_qubits < 1 || bottom_qubits > 63)
      throw DomainError("branch state needs 0..k top qubits and 1..63 bottom qubits");
    top_amplitudes_.assign(std::uint64_t{1} << top_qubits_, Complex{0.0, 0.0});
    branch_bitstrings_.assign(top_amplitudes_.size(), 0);
  }

  // Single-branch state |bits> with no top register.
  static BranchState single(int bottom_qubits, std::uint64_t bits) {
    BranchState s(0, bottom_qubits);
    s.set_branch(0, Complex{1.0, 0.0}, bits);
    return s;
  }

  int top_qubits() const { return top_qubits_; }
  int bottom_qubits() const { return bottom_qubits_; }
  std::uint64_t branch_count() const { return top_amplitudes_.size(); }

  const std::vector<Complex>& top_amplitudes() const { return top_amplitudes_; }
  const std::vector<std::uint64_t>& branch_bitstrings() const { return branch_bitstrings_; }

  Complex amplitude(std::uint64_t top_index) const { return top_amplitudes_.at(top_index); }
  std::uint64_t bits(std::uint64_t top_index) const { return branch_bitstrings_.at(top_index); }

  void set_branch(std::uint64_t top_index, Complex amp, std::uint64_t bits) {
    if (bottom_qubits_ < 64 && bits >> bottom_qubits_)
      throw ValueOutOfRange("branch bitstring wider than bottom register");
    top_amplitudes_.at(top_index) = amp;
    branch_bitstrings_.at(top_index) = bits;
  }

  double norm_sq() const {
    double s = 0.0;
    for (const Complex& a : top_amplitudes_) s += std::norm(a);
    return s;
  }

  // Bottom-register qubit q as a mask within the stored bitstring; qubit 0 is
  // the most significant bottom bit, matching the dense embedding.
  std::uint64_t qubit_mask(int q) const {
    if (q < 0 || q >= bottom_qubits_) throw IndexOutOfRange("bottom qubit out of range");
    return std::uint64_t{1} << (bottom_qubits_ - 1 - q);
  }

  int bit(std::uint64_t bits, int q) const { return (bits & qubit_mask(q)) ? 1 : 0; }

  void apply(const GateOp& op) {
    validate_gate(op, bottom_qubits_);
    if (!is_classical(op.kind))
      throw NonClassicalGateOnBranch(std::string(kind_name(op.kind)) +
                                     " cannot act on classical branch bitstrings");
    if (op.kind == GateKind::Reset) {
      apply_reset(op.targets[0]);
      return;
    }
    for (std::size_t i = 0; i < branch_bitstrings_.size(); ++i) {
      std::uint64_t& b = branch_bitstrings_[i];
      if (!controls_satisfied(b, op.controls)) continue;
      switch (op.kind) {
        case GateKind::X:
        case GateKind::Cx:
        case GateKind::Mcx:
          b ^= qubit_mask(op.targets[0]);
          break;
        case GateKind::Swap: {
          const std::uint64_t ma = qubit_mask(op.targets[0]);
          const std::uint64_t mb = qubit_mask(op.targets[1]);
          const bool va = (b & ma) != 0, vb = (b & mb) != 0;
          if (va != vb) b ^= ma | mb;
          break;
        }
        default:
          break;
      }
    }
  }

  void apply(const Circuit& c) {
    if (c.num_qubits != bottom_qubits_) throw WidthMismatch("circuit width != bottom register");
    for (const GateOp& g : c.gates) apply(g);
  }

  // Dense embedding on (top + bottom) qubits; top register occupies the
  // most significant positions.
  StateVector to_state_vector() const {
    const int n = top_qubits_ + bottom_qubits_;
    std::vector<Complex> amps(std::uint64_t{1} << n, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < top_amplitudes_.size(); ++i) {
      const std::uint64_t index =
          (static_cast<std::uint64_t>(i) << bottom_qubits_) | branch_bitstrings_[i];
      amps[index] += top_amplitudes_[i];
    }
    return StateVector::from_amplitudes(std::move(amps));
  }

  // Samples top-register values per |a_i|^2; the full branch bitstring comes
  // along with each observation.
  ShotHistogram sample_tops(std::int64_t shots, std::uint64_t seed) const {
    if (shots < 1) throw DomainError("sample_tops: need at least one shot");
    std::vector<double> cdf(top_amplitudes_.size());
    double acc = 0.0;
    std::uint64_t last_nonzero = 0;
    for (std::size_t i = 0; i < top_amplitudes_.size(); ++i) {
      const double p = std::norm(top_amplitudes_[i]);
      if (p > 0.0) last_nonzero = i;
      acc += p;
      cdf[i] = acc;
    }
    Rng rng(seed);
    ShotHistogram hist;
    hist.total = shots;
    for (std::int64_t s = 0; s < shots; ++s) {
      const double u = rng.next_double() * acc;
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      std::uint64_t i = it == cdf.end() ? last_nonzero
                                        : static_cast<std::uint64_t>(it - cdf.begin());
      ++hist.counts[i];
    }
    return hist;
  }

 private:
  bool controls_satisfied(std::uint64_t bits, const std::vector<ControlBit>& controls) const {
    for (const ControlBit& c : controls)
      if ((bit(bits, c.qubit) == 1) != c.closed) return false;
    return true;
  }

  // Reset is per-branch classical, but clearing a bit that differs between
  // branches with nonzero mass would merge distinct quantum states; that is
  // the superposition case and is rejected.
  void apply_reset(int q) {
    const std::uint64_t mask = qubit_mask(q);
    double mass0 = 0.0, mass1 = 0.0;
    for (std::size_t i = 0; i < branch_bitstrings_.size(); ++i) {
      const double p = std::norm(top_amplitudes_[i]);
      if (branch_bitstrings_[i] & mask)
        mass1 += p;
      else
        mass0 += p;
    }
    constexpr double kTol = 1e-10;
    if (mass0 > kTol && mass1 > kTol)
      throw ResetOnSuperposedQubit("reset on bottom qubit " + std::to_string(q) +
                                   " whose value differs across branches");
    for (std::uint64_t& b : branch_bitstrings_) b &= ~mask;
  }

  int top_qubits_ = 0;
  int bottom_qubits_ = 0;
  std::vector<Complex> top_amplitudes_;
  std::vector<std::uint64_t> branch_bitstrings_;
};

}  // namespace qencost
