#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "qencost/branch_state.hpp"
#include "qencost/circuit.hpp"
#include "qencost/errors.hpp"
#include "qencost/gates.hpp"
#include "qencost/state_vector.hpp"
#include "test_util.hpp"

using namespace qencost;

namespace {

constexpr double kPi = 3.14159265358979323846;

TEST(StateVector, ConstructionAndIndexing) {
  StateVector s(3);
  EXPECT_EQ(s.dim(), 8u);
  EXPECT_EQ(s.amplitude(0), Complex(1.0, 0.0));
  // Qubit 0 is the most significant bit of the index.
  EXPECT_EQ(s.bit(0b100, 0), 1);
  EXPECT_EQ(s.bit(0b100, 1), 0);
  EXPECT_EQ(s.bit(0b001, 2), 1);
  EXPECT_NEAR(s.norm_sq(), 1.0, 1e-12);
}

TEST(StateVector, RxPiMapsZeroToIOne) {
  StateVector s(1);
  s.apply(GateOp::rx(0, kPi));
  EXPECT_NEAR(std::abs(s.amplitude(0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s.amplitude(1) - Complex(0.0, 1.0)), 0.0, 1e-12);
}

TEST(StateVector, RySignConvention) {
  // Top-right entry is +sin, so |1> picks up +sin on the |0> component.
  StateVector s(1, 1);
  s.apply(GateOp::ry(0, kPi / 2));
  EXPECT_NEAR(s.amplitude(0).real(), std::sin(kPi / 4), 1e-12);
  EXPECT_NEAR(s.amplitude(1).real(), std::cos(kPi / 4), 1e-12);
}

TEST(StateVector, RzPhases) {
  StateVector s0(1, 0), s1(1, 1);
  s0.apply(GateOp::rz(0, 0.7));
  s1.apply(GateOp::rz(0, 0.7));
  EXPECT_NEAR(std::abs(s0.amplitude(0) - std::polar(1.0, -0.35)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s1.amplitude(1) - std::polar(1.0, 0.35)), 0.0, 1e-12);
}

TEST(StateVector, RyThenRzReachesAnyOneQubitState) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const StateVector target = qtest::random_state(1, rng);
    const Complex p = target.amplitude(0), q = target.amplitude(1);
    const double theta = 2.0 * std::atan2(std::abs(q), std::abs(p));
    const double phi = std::arg(q) - std::arg(p);
    StateVector s(1);
    s.apply(GateOp::ry(0, -theta));  // -theta: this Ry sends |0> to (cos, -sin)
    s.apply(GateOp::rz(0, phi));
    EXPECT_GT(qtest::fidelity(target, s), 1.0 - 1e-12);
  }
}

TEST(StateVector, CxBuildsBellPair) {
  const double r = 1.0 / std::sqrt(2.0);
  StateVector s = StateVector::from_amplitudes({Complex(r, 0), Complex(0, 0), Complex(r, 0), Complex(0, 0)});
  s.apply(GateOp::cx(0, 1));
  EXPECT_NEAR(std::abs(s.amplitude(0b00) - Complex(r, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s.amplitude(0b11) - Complex(r, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s.amplitude(0b01)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s.amplitude(0b10)), 0.0, 1e-12);
}

TEST(StateVector, RotationInversesCancel) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const double theta = rng.next_double() * 2 * kPi - kPi;
    const StateVector start = qtest::random_state(2, rng);
    for (auto maker : {&GateOp::rx, &GateOp::ry, &GateOp::rz}) {
      StateVector s = start;
      s.apply(maker(0, theta));
      s.apply(maker(0, -theta));
      EXPECT_LT(qtest::max_abs_diff(start, s), 1e-12);
    }
  }
}

TEST(StateVector, CxSelfInverse) {
  Rng rng(31);
  const StateVector start = qtest::random_state(3, rng);
  StateVector s = start;
  s.apply(GateOp::cx(1, 2));
  s.apply(GateOp::cx(1, 2));
  EXPECT_LT(qtest::max_abs_diff(start, s), 1e-12);
}

// Two identical CX gates flanking a central CX that shares their target
// can be dropped; exhaustive over all registers up to 4 qubits.
TEST(StateVector, ThreeCxCancellation) {
  for (int n = 3; n <= 4; ++n) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int t = 0; t < n; ++t) {
          if (a == b || a == t || b == t) continue;
          for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
            StateVector lhs(n, k);
            lhs.apply(GateOp::cx(a, t));
            lhs.apply(GateOp::cx(b, t));
            lhs.apply(GateOp::cx(a, t));
            StateVector rhs(n, k);
            rhs.apply(GateOp::cx(b, t));
            EXPECT_LT(qtest::max_abs_diff(lhs, rhs), 1e-15);
          }
        }
      }
    }
  }
}

TEST(StateVector, NormPreservedOverThousandRandomGates) {
  Rng rng(41);
  StateVector s = qtest::random_state(8, rng);
  for (int i = 0; i < 1000; ++i) {
    s.apply(qtest::random_gate(8, rng));
    if (i % 100 == 99) {
      EXPECT_NEAR(s.norm_sq(), 1.0, 1e-12);
    }
  }
  EXPECT_NEAR(s.norm_sq(), 1.0, 1e-12);
}

TEST(StateVector, OpenControlsFireOnZero) {
  StateVector s(2, 0b00);
  GateOp gate = GateOp::mcx({{0, false}}, 1);
  s.apply(gate);
  EXPECT_NEAR(std::abs(s.amplitude(0b01)), 1.0, 1e-12);
  StateVector t(2, 0b10);
  t.apply(gate);
  EXPECT_NEAR(std::abs(t.amplitude(0b10)), 1.0, 1e-12);
}

TEST(StateVector, SwapExchangesBits) {
  StateVector s(3, 0b100);
  s.apply(GateOp::swap(0, 2));
  EXPECT_NEAR(std::abs(s.amplitude(0b001)), 1.0, 1e-12);
}

TEST(StateVector, ResetOnClassicalQubit) {
  StateVector s(2, 0b10);
  s.apply(GateOp::reset(0));
  EXPECT_NEAR(std::abs(s.amplitude(0b00)), 1.0, 1e-12);
  // Already |0>: no-op.
  s.apply(GateOp::reset(1));
  EXPECT_NEAR(std::abs(s.amplitude(0b00)), 1.0, 1e-12);
}

TEST(StateVector, ResetOnSuperposedQubitThrows) {
  StateVector s(1);
  s.apply(GateOp::h(0));
  EXPECT_THROW(s.apply(GateOp::reset(0)), ResetOnSuperposedQubit);

  // Entangled case: each qubit individually is 50/50.
  const double r = 1.0 / std::sqrt(2.0);
  StateVector bell = StateVector::from_amplitudes({Complex(r, 0), {}, {}, Complex(r, 0)});
  EXPECT_THROW(bell.apply(GateOp::reset(1)), ResetOnSuperposedQubit);
}

TEST(StateVector, ResetToleratesTinyStrayMass) {
  const double eps = 1e-6;  // eps^2 = 1e-12 of mass, below the 1e-10 gate
  std::vector<Complex> amps = {Complex(std::sqrt(1.0 - eps * eps), 0.0), Complex(eps, 0.0)};
  StateVector s = StateVector::from_amplitudes(amps);
  s.apply(GateOp::reset(0));
  EXPECT_NEAR(std::abs(s.amplitude(0)), 1.0, 1e-12);
  EXPECT_NEAR(s.norm_sq(), 1.0, 1e-12);
}

TEST(StateVector, ErrorsOnBadIndicesAndSizes) {
  StateVector s(2);
  EXPECT_THROW(s.apply(GateOp::x(2)), IndexOutOfRange);
  EXPECT_THROW(s.apply(GateOp::cx(1, 1)), IndexOutOfRange);
  EXPECT_THROW(StateVector::from_amplitudes({Complex(1, 0), {}, {}}), NotPowerOfTwo);
  EXPECT_THROW(StateVector::from_amplitudes({Complex(1, 0), Complex(0.5, 0)}), UnnormalizedTarget);
  EXPECT_THROW(StateVector(25), QubitLimitExceeded);
}

TEST(Depth, SerializesSameQubitParallelizesDisjoint) {
  Circuit c(2);
  c.push(GateOp::ry(0, 0.1));
  c.push(GateOp::rz(0, 0.2));
  EXPECT_EQ(depth(c), 2);

  Circuit d(2);
  d.push(GateOp::ry(0, 0.1));
  d.push(GateOp::ry(1, 0.2));
  EXPECT_EQ(depth(d), 1);
}

TEST(Depth, PerKindLayerContributions) {
  Circuit c(3);
  c.push(GateOp::ry(0, 0.1));
  c.push(GateOp::cx(1, 2));   // parallel with the Ry: mixed layer
  c.push(GateOp::rz(0, 0.2));
  const DepthReport report = depth_profile(c);
  EXPECT_EQ(report.total, 2);
  EXPECT_EQ(report.rotation, 2);
  EXPECT_EQ(report.cx, 1);
  EXPECT_EQ(report.of_kind(GateKind::Ry), 1);
  EXPECT_EQ(report.of_kind(GateKind::Rz), 1);
}

TEST(Depth, InvariantUnderWithinLayerReordering) {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    Circuit c(6);
    for (int i = 0; i < 60; ++i) c.push(qtest::random_gate(6, rng));
    const std::vector<int> layers = asap_layers(c);
    const DepthReport before = depth_profile(c);

    // Stable-permute gates inside each layer, preserving layer order.
    std::vector<std::size_t> order(c.gates.size());
    std::iota(order.begin(), order.end(), 0u);
    std::vector<std::uint64_t> jitter(c.gates.size());
    for (auto& j : jitter) j = rng.next_u64();
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return layers[a] != layers[b] ? layers[a] < layers[b] : jitter[a] < jitter[b];
    });
    Circuit shuffled(c.num_qubits);
    for (std::size_t i : order) shuffled.push(c.gates[i]);

    const DepthReport after = depth_profile(shuffled);
    EXPECT_EQ(before.total, after.total);
    EXPECT_EQ(before.rotation, after.rotation);
    EXPECT_EQ(before.cx, after.cx);
  }
}

TEST(SampleShots, DeterministicStateAndSeed) {
  StateVector s(2);
  const ShotHistogram h = s.sample_shots(100, 7);
  EXPECT_EQ(h.count(0), 100);
  EXPECT_EQ(h.total, 100);

  StateVector plus(1);
  plus.apply(GateOp::h(0));
  const ShotHistogram a = plus.sample_shots(1000, 42);
  const ShotHistogram b = plus.sample_shots(1000, 42);
  EXPECT_EQ(a.counts, b.counts);
}

TEST(SampleShots, LawOfLargeNumbersOnPlusState) {
  StateVector plus(1);
  plus.apply(GateOp::h(0));
  const std::int64_t shots = 1000000;
  const ShotHistogram h = plus.sample_shots(shots, 12345);
  const double p0 = static_cast<double>(h.count(0)) / static_cast<double>(shots);
  const double sigma = std::sqrt(0.25 / static_cast<double>(shots));
  EXPECT_LT(std::abs(p0 - 0.5), 3 * sigma);
}

// Two shots of a 1-qubit uniform state resolve the 50/50 distribution
// exactly when the outcomes differ; that happens with probability 1/2.
TEST(SampleShots, TwoShotResolutionChanceIsHalf) {
  StateVector plus(1);
  plus.apply(GateOp::h(0));
  const int trials = 100000;
  int resolved = 0;
  for (int seed = 0; seed < trials; ++seed) {
    const ShotHistogram h = plus.sample_shots(2, static_cast<std::uint64_t>(seed));
    if (h.count(0) == 1) ++resolved;
  }
  const double fraction = static_cast<double>(resolved) / trials;
  EXPECT_NEAR(fraction, 0.5, 0.01);
}

TEST(BranchState, XFlipsEveryBranch) {
  BranchState s(1, 4);
  s.set_branch(0, Complex(0.6, 0.0), 0b0000);
  s.set_branch(1, Complex(0.8, 0.0), 0b1010);
  s.apply(GateOp::x(3));
  EXPECT_EQ(s.bits(0), 0b0001u);
  EXPECT_EQ(s.bits(1), 0b1011u);
}

TEST(BranchState, McxPolaritiesFireOnMatchingBranches) {
  BranchState s(1, 3);
  s.set_branch(0, Complex(0.6, 0.0), 0b010);
  s.set_branch(1, Complex(0.8, 0.0), 0b110);
  // Fires when qubit0 is |0> and qubit1 is |1>: only the first branch.
  s.apply(GateOp::mcx({{0, false}, {1, true}}, 2));
  EXPECT_EQ(s.bits(0), 0b011u);
  EXPECT_EQ(s.bits(1), 0b110u);
}

TEST(BranchState, RejectsNonClassicalGates) {
  BranchState s = BranchState::single(2, 0b00);
  EXPECT_THROW(s.apply(GateOp::h(0)), NonClassicalGateOnBranch);
  EXPECT_THROW(s.apply(GateOp::ry(1, 0.3)), NonClassicalGateOnBranch);
}

TEST(BranchState, ResetClearsUniformBitRejectsMixedBit) {
  BranchState s(1, 2);
  s.set_branch(0, Complex(0.6, 0.0), 0b10);
  s.set_branch(1, Complex(0.8, 0.0), 0b11);
  s.apply(GateOp::reset(0));  // qubit 0 is 1 in both branches
  EXPECT_EQ(s.bits(0), 0b00u);
  EXPECT_EQ(s.bits(1), 0b01u);
  EXPECT_THROW(s.apply(GateOp::reset(1)), ResetOnSuperposedQubit);
}

TEST(BranchState, MatchesDenseSimulatorOnClassicalCircuits) {
  Rng rng(61);
  for (int trial = 0; trial < 3; ++trial) {
    // 10 qubits total: 2 top + 8 bottom.
    BranchState branch(2, 8);
    std::vector<Complex> amps = qtest::random_amplitudes(2, rng);
    for (std::uint64_t i = 0; i < 4; ++i) branch.set_branch(i, amps[i], rng.next_below(256));

    StateVector dense = branch.to_state_vector();
    Circuit c(8);
    for (int g = 0; g < 60; ++g) c.push(qtest::random_classical_gate(8, rng));

    branch.apply(c);
    std::vector<int> to_global(8);
    for (int q = 0; q < 8; ++q) to_global[static_cast<std::size_t>(q)] = 2 + q;
    dense.apply(remap_circuit(c, to_global, 10));

    EXPECT_LT(qtest::max_abs_diff(branch.to_state_vector(), dense), 1e-12);
    EXPECT_NEAR(branch.norm_sq(), 1.0, 1e-12);
  }
}

}  // namespace
