#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "qencost/circuit.hpp"
#include "qencost/errors.hpp"
#include "qencost/state_vector.hpp"

namespace qencost {

inline std::uint64_t gray_code(std::uint64_t m) { return m ^ (m >> 1); }

// Select-bit position controlling the c-th CX (1-based) of a decomposed
// k-select multiplexor: the lowest set bit of c, except the closing CX
// (c = 2^k) which wraps to the top position to complete the Gray cycle.
inline int ruler_position(std::uint64_t c, int k) {
  if (c == (std::uint64_t{1} << k)) return k - 1;
  int p = 0;
  while (!(c & 1)) {
    c >>= 1;
    ++p;
  }
  return p;
}

// Solves the pattern angles phi from the per-select-value angles theta:
// conjugation by the pattern's CX gates flips rotation signs per the
// Gray-code ordered +-1 system, so phi_m = 2^-k * sum_v (-1)^<v, gray(m)> theta_v.
inline std::vector<double> multiplexor_angles(const std::vector<double>& raw) {
  const std::size_t K = raw.size();
  if (K == 0 || (K & (K - 1)) != 0)
    throw NotPowerOfTwo("multiplexor needs a power-of-two angle count");
  std::vector<double> phi(K);
  for (std::size_t m = 0; m < K; ++m) {
    const std::uint64_t g = gray_code(m);
    double sum = 0.0;
    for (std::size_t v = 0; v < K; ++v) {
      const int parity = std::popcount(static_cast<std::uint64_t>(v) & g) & 1;
      sum += parity ? -raw[v] : raw[v];
    }
    phi[m] = sum / static_cast<double>(K);
  }
  return phi;
}

// Full rotation/CX pattern equivalent to a k-select multiplexor on k+1
// qubits (selects 0..k-1, target k), including the closing CX. `raw` holds
// the requested rotation angle per select value.
inline Circuit emit_multiplexor(GateKind axis, int k, const std::vector<double>& raw) {
  if (axis != GateKind::Ry && axis != GateKind::Rz)
    throw DomainError("multiplexor axis must be Ry or Rz");
  if (k < 0 || raw.size() != (std::size_t{1} << k))
    throw NotPowerOfTwo("need 2^k angles for k select qubits");
  const std::vector<double> phi = multiplexor_angles(raw);
  const int target = k;
  Circuit c(k + 1);
  for (std::size_t m = 0; m < phi.size(); ++m) {
    c.push(GateOp{axis, {target}, {}, phi[m]});
    if (k > 0) {
      const int pos = ruler_position(m + 1, k);
      c.push(GateOp::cx(target - 1 - pos, target));
    }
  }
  return c;
}

struct SynthesisReport {
  int n = 0;
  std::int64_t ry_count = 0;
  std::int64_t rz_count = 0;
  std::int64_t cx_count = 0;
  int rotation_depth = 0;
  int cx_depth = 0;
  int total_depth = 0;
  Circuit circuit;
};

namespace detail {

// One disentangling pass: collapses amplitude pairs of level d into level
// d-1 and records the per-pair rotation angles that undo the collapse.
struct DisentangleLevel {
  std::vector<Complex> parent;
  std::vector<double> ry_raw;
  std::vector<double> rz_raw;
};

inline DisentangleLevel disentangle(const std::vector<Complex>& level) {
  DisentangleLevel out;
  const std::size_t half = level.size() / 2;
  out.parent.resize(half);
  out.ry_raw.resize(half);
  out.rz_raw.resize(half);
  for (std::size_t v = 0; v < half; ++v) {
    const Complex p = level[2 * v], q = level[2 * v + 1];
    const double r = std::hypot(std::abs(p), std::abs(q));
    if (r == 0.0) {
      // Zero-norm pair: any angle works, 0 keeps the emission noise-free.
      out.parent[v] = Complex{0.0, 0.0};
      out.ry_raw[v] = 0.0;
      out.rz_raw[v] = 0.0;
      continue;
    }
    const double arg_p = p == Complex{0.0, 0.0} ? 0.0 : std::arg(p);
    const double arg_q = q == Complex{0.0, 0.0} ? 0.0 : std::arg(q);
    out.ry_raw[v] = -2.0 * std::atan2(std::abs(q), std::abs(p));
    out.rz_raw[v] = arg_q - arg_p;
    out.parent[v] = std::polar(r, 0.5 * (arg_p + arg_q));
  }
  return out;
}

}  // namespace detail

// State-preparation synthesis: disentangle the least significant qubit
// level by level, then emit per block the Ry pattern followed by the
// mirrored Rz pattern. Mirroring makes the two patterns meet CX-against-CX
// at the junction, so that pair is never emitted, and lets each block's
// first rotation start in layer one.
inline SynthesisReport synthesize_init(const std::vector<Complex>& target) {
  if (target.empty() || (target.size() & (target.size() - 1)) != 0)
    throw NotPowerOfTwo("target length must be a power of two");
  int n = 0;
  while ((std::size_t{1} << n) < target.size()) ++n;
  if (n == 0) throw NotPowerOfTwo("target must span at least one qubit");
  double norm = 0.0;
  for (const Complex& a : target) norm += std::norm(a);
  if (std::abs(norm - 1.0) > 1e-10)
    throw UnnormalizedTarget("synthesis target norm deviates by " +
                             std::to_string(std::abs(norm - 1.0)));

  // ry_raw[b], rz_raw[b]: per-select-value angles of block b (1-based).
  std::vector<std::vector<double>> ry_raw(static_cast<std::size_t>(n) + 1);
  std::vector<std::vector<double>> rz_raw(static_cast<std::size_t>(n) + 1);
  std::vector<Complex> level = target;
  for (int d = n; d >= 1; --d) {
    detail::DisentangleLevel step = detail::disentangle(level);
    ry_raw[static_cast<std::size_t>(d)] = std::move(step.ry_raw);
    rz_raw[static_cast<std::size_t>(d)] = std::move(step.rz_raw);
    level = std::move(step.parent);
  }

  SynthesisReport report;
  report.n = n;
  report.circuit = Circuit(n);
  for (int b = 1; b <= n; ++b) {
    const int k = b - 1;     // select qubits 0..b-2
    const int tq = b - 1;    // block target
    const std::vector<double> phi_y = multiplexor_angles(ry_raw[static_cast<std::size_t>(b)]);
    const std::vector<double> phi_z = multiplexor_angles(rz_raw[static_cast<std::size_t>(b)]);
    const std::size_t K = std::size_t{1} << k;
    for (std::size_t m = 0; m < K; ++m) {
      report.circuit.push(GateOp::ry(tq, phi_y[m]));
      if (m + 1 < K)
        report.circuit.push(GateOp::cx(tq - 1 - ruler_position(m + 1, k), tq));
    }
    for (std::size_t m = K; m-- > 0;) {
      report.circuit.push(GateOp::rz(tq, phi_z[m]));
      if (m > 0)
        report.circuit.push(GateOp::cx(tq - 1 - ruler_position(m, k), tq));
    }
  }

  for (const GateOp& g : report.circuit.gates) {
    if (g.kind == GateKind::Ry) ++report.ry_count;
    if (g.kind == GateKind::Rz) ++report.rz_count;
    if (g.kind == GateKind::Cx) ++report.cx_count;
  }
  const DepthReport depths = depth_profile(report.circuit);
  report.rotation_depth = depths.rotation;
  report.cx_depth = depths.cx;
  report.total_depth = depths.total;
  return report;
}

inline SynthesisReport synthesize_init(const StateVector& target) {
  return synthesize_init(target.amplitudes());
}

struct GateTimeProfile {
  double t_1q = 0.0;  // seconds per native 1-qubit rotation
  double t_cx = 0.0;  // seconds per CX
  std::optional<double> coherence_budget;  // seconds, for headroom reporting
};

// 50 ns / 200 ns round-number baseline and the ibm_sherbrooke calibration.
inline constexpr GateTimeProfile kBaselineGateTimes{50e-9, 200e-9, {}};
inline constexpr GateTimeProfile kSherbrookeGateTimes{56.889e-9, 533.333e-9, {}};

struct RuntimeEstimate {
  double seconds = 0.0;
  std::optional<double> budget_ratio;  // estimate / coherence_budget when set
  std::int64_t rotation_depth = 0;
  std::int64_t cx_depth = 0;
};

// Closed-form execution-time estimate of the synthesized init circuit:
// rotation layers cost t_1q each, CX layers t_cx each.
inline RuntimeEstimate runtime_estimate(int n, const GateTimeProfile& profile) {
  if (n < 1) throw DomainError("runtime_estimate: n must be >= 1");
  if (n > 62) throw DomainError("runtime_estimate: n too large for integer depths");
  if (!(profile.t_1q > 0.0) || !(profile.t_cx > 0.0))
    throw DomainError("gate times must be positive");
  RuntimeEstimate est;
  est.rotation_depth = (std::int64_t{1} << (n + 1)) - (n + 1);
  est.cx_depth = (std::int64_t{1} << (n + 1)) - 2 * (n + 1);
  est.seconds = static_cast<double>(est.rotation_depth) * profile.t_1q +
                static_cast<double>(est.cx_depth) * profile.t_cx;
  if (profile.coherence_budget) est.budget_ratio = est.seconds / *profile.coherence_budget;
  return est;
}

}  // namespace qencost
