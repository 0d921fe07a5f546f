#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qencost/circuit.hpp"
#include "qencost/errors.hpp"
#include "qencost/gates.hpp"
#include "qencost/rng.hpp"

namespace qencost {

using Complex = std::complex<double>;

// Dense-simulation size limit; QENCOST_MAX_QUBITS overrides the default 24.
inline int dense_qubit_cap() {
  if (const char* s = std::getenv("QENCOST_MAX_QUBITS")) {
    const long v = std::strtol(s, nullptr, 10);
    if (v >= 1 && v <= 30) return static_cast<int>(v);
  }
  return 24;
}

struct ShotHistogram {
  std::map<std::uint64_t, std::int64_t> counts;
  std::int64_t total = 0;

  std::int64_t count(std::uint64_t index) const {
    const auto it = counts.find(index);
    return it == counts.end() ? 0 : it->second;
  }
};

// Dense statevector over n qubits. Qubit 0 is the most significant bit of
// the basis index, so |q0 q1 ... q_{n-1}> has index q0*2^{n-1} + ... .
class StateVector {
 public:
  explicit StateVector(int num_qubits) : StateVector(num_qubits, 0) {}

  StateVector(int num_qubits, std::uint64_t basis_index) {
    check_size(num_qubits);
    n_ = num_qubits;
    amps_.assign(std::uint64_t{1} << n_, Complex{0.0, 0.0});
    if (basis_index >= dim()) throw IndexOutOfRange("basis index out of range");
    amps_[basis_index] = Complex{1.0, 0.0};
  }

  static StateVector from_amplitudes(std::vector<Complex> amps) {
    if (amps.empty() || (amps.size() & (amps.size() - 1)) != 0)
      throw NotPowerOfTwo("amplitude count must be a power of two");
    int n = 0;
    while ((std::size_t{1} << n) < amps.size()) ++n;
    check_size(n == 0 ? 1 : n);
    if (n == 0) throw NotPowerOfTwo("need at least 2 amplitudes");
    double norm = 0.0;
    for (const Complex& a : amps) norm += std::norm(a);
    if (std::abs(norm - 1.0) > 1e-10)
      throw UnnormalizedTarget("amplitude vector norm deviates by " +
                               std::to_string(std::abs(norm - 1.0)));
    StateVector s(n, 0);
    s.amps_ = std::move(amps);
    return s;
  }

  int num_qubits() const { return n_; }
  std::uint64_t dim() const { return std::uint64_t{1} << n_; }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  Complex amplitude(std::uint64_t k) const { return amps_.at(k); }
  double probability(std::uint64_t k) const { return std::norm(amps_.at(k)); }

  double norm_sq() const {
    double s = 0.0;
    for (const Complex& a : amps_) s += std::norm(a);
    return s;
  }

  // Bit of qubit q in basis index k under the MSB-first convention.
  int bit(std::uint64_t k, int q) const {
    return static_cast<int>((k >> (n_ - 1 - q)) & 1u);
  }

  std::uint64_t qubit_mask(int q) const { return std::uint64_t{1} << (n_ - 1 - q); }

  void apply(const GateOp& op) {
    validate_gate(op, n_);
    switch (op.kind) {
      case GateKind::Rx: {
        const double h = op.angle / 2.0;
        apply_1q(op, Complex{std::cos(h), 0.0}, Complex{0.0, std::sin(h)},
                 Complex{0.0, std::sin(h)}, Complex{std::cos(h), 0.0});
        break;
      }
      case GateKind::Ry: {
        // Signs as used by the synthesis recursion: +sin top-right.
        const double h = op.angle / 2.0;
        apply_1q(op, Complex{std::cos(h), 0.0}, Complex{std::sin(h), 0.0},
                 Complex{-std::sin(h), 0.0}, Complex{std::cos(h), 0.0});
        break;
      }
      case GateKind::Rz: {
        const double h = op.angle / 2.0;
        apply_1q(op, std::polar(1.0, -h), Complex{0.0, 0.0}, Complex{0.0, 0.0},
                 std::polar(1.0, h));
        break;
      }
      case GateKind::H: {
        const double r = 1.0 / std::sqrt(2.0);
        apply_1q(op, Complex{r, 0.0}, Complex{r, 0.0}, Complex{r, 0.0}, Complex{-r, 0.0});
        break;
      }
      case GateKind::X:
      case GateKind::Cx:
      case GateKind::Mcx:
        apply_1q(op, Complex{0.0, 0.0}, Complex{1.0, 0.0}, Complex{1.0, 0.0},
                 Complex{0.0, 0.0});
        break;
      case GateKind::Swap:
        apply_swap(op);
        break;
      case GateKind::Reset:
        apply_reset(op.targets[0]);
        break;
    }
  }

  void apply(const Circuit& c) {
    if (c.num_qubits != n_) throw WidthMismatch("circuit width != state width");
    for (const GateOp& g : c.gates) apply(g);
  }

  // Multinomial sampling by CDF inversion; deterministic for a fixed seed.
  ShotHistogram sample_shots(std::int64_t shots, std::uint64_t seed) const {
    if (shots < 1) throw DomainError("sample_shots: need at least one shot");
    std::vector<double> cdf(amps_.size());
    double acc = 0.0;
    std::uint64_t last_nonzero = 0;
    for (std::size_t k = 0; k < amps_.size(); ++k) {
      const double p = std::norm(amps_[k]);
      if (p > 0.0) last_nonzero = k;
      acc += p;
      cdf[k] = acc;
    }
    Rng rng(seed);
    ShotHistogram hist;
    hist.total = shots;
    for (std::int64_t s = 0; s < shots; ++s) {
      const double u = rng.next_double() * acc;
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      std::uint64_t k = it == cdf.end() ? last_nonzero
                                        : static_cast<std::uint64_t>(it - cdf.begin());
      ++hist.counts[k];
    }
    return hist;
  }

 private:
  static void check_size(int num_qubits) {
    if (num_qubits < 1) throw DomainError("need at least one qubit");
    if (num_qubits > dense_qubit_cap())
      throw QubitLimitExceeded("dense simulation capped at " +
                               std::to_string(dense_qubit_cap()) + " qubits (QENCOST_MAX_QUBITS)");
  }

  bool controls_satisfied(std::uint64_t k, const std::vector<ControlBit>& controls) const {
    for (const ControlBit& c : controls)
      if ((bit(k, c.qubit) == 1) != c.closed) return false;
    return true;
  }

  void apply_1q(const GateOp& op, Complex m00, Complex m01, Complex m10, Complex m11) {
    const std::uint64_t mask = qubit_mask(op.targets[0]);
    for (std::uint64_t k = 0; k < dim(); ++k) {
      if (k & mask) continue;
      if (!controls_satisfied(k, op.controls)) continue;
      const std::uint64_t k1 = k | mask;
      const Complex a0 = amps_[k], a1 = amps_[k1];
      amps_[k] = m00 * a0 + m01 * a1;
      amps_[k1] = m10 * a0 + m11 * a1;
    }
  }

  void apply_swap(const GateOp& op) {
    const std::uint64_t ma = qubit_mask(op.targets[0]);
    const std::uint64_t mb = qubit_mask(op.targets[1]);
    for (std::uint64_t k = 0; k < dim(); ++k) {
      if (!(k & ma) || (k & mb)) continue;  // visit each mismatched pair once
      if (!controls_satisfied(k, op.controls)) continue;
      std::swap(amps_[k], amps_[(k ^ ma) | mb]);
    }
  }

  // Forces the qubit to |0>. Permitted only when the qubit is classical
  // across the state: all but at most 1e-10 of the mass on one value.
  void apply_reset(int q) {
    const std::uint64_t mask = qubit_mask(q);
    double mass1 = 0.0;
    for (std::uint64_t k = 0; k < dim(); ++k)
      if (k & mask) mass1 += std::norm(amps_[k]);
    const double mass0 = norm_sq() - mass1;
    constexpr double kTol = 1e-10;
    if (mass1 <= kTol) {
      for (std::uint64_t k = 0; k < dim(); ++k)
        if (k & mask) amps_[k] = Complex{0.0, 0.0};
      renormalize(mass0);
    } else if (mass0 <= kTol) {
      for (std::uint64_t k = 0; k < dim(); ++k) {
        if (k & mask) {
          amps_[k ^ mask] = amps_[k];
          amps_[k] = Complex{0.0, 0.0};
        }
      }
      renormalize(mass1);
    } else {
      throw ResetOnSuperposedQubit("reset on qubit " + std::to_string(q) +
                                   " with superposed mass " + std::to_string(std::min(mass0, mass1)));
    }
  }

  void renormalize(double kept_mass) {
    if (kept_mass <= 0.0) throw ResetOnSuperposedQubit("reset left zero mass");
    const double scale = 1.0 / std::sqrt(kept_mass);
    for (Complex& a : amps_) a *= scale;
  }

  int n_ = 0;
  std::vector<Complex> amps_;
};

}  // namespace qencost
