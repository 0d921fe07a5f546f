#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qencost/amp_init.hpp"
#include "qencost/state_vector.hpp"
#include "test_util.hpp"

using namespace qencost;

namespace {

StateVector prepare(const SynthesisReport& report) {
  StateVector s(report.n);
  s.apply(report.circuit);
  return s;
}

TEST(MultiplexorAngles, BaseCases) {
  EXPECT_EQ(multiplexor_angles({0.7}), std::vector<double>{0.7});

  const std::vector<double> phi = multiplexor_angles({0.3, 0.9});
  EXPECT_NEAR(phi[0], 0.6, 1e-15);   // (t0 + t1) / 2
  EXPECT_NEAR(phi[1], -0.3, 1e-15);  // (t0 - t1) / 2

  EXPECT_THROW(multiplexor_angles({0.1, 0.2, 0.3}), NotPowerOfTwo);
}

// The emitted rotation/CX pattern must act exactly like the multiplexor:
// for each select value, rotate the target by the requested raw angle.
TEST(MultiplexorAngles, PatternReproducesMultiplexor) {
  Rng rng(77);
  for (GateKind axis : {GateKind::Ry, GateKind::Rz}) {
    for (int k = 1; k <= 3; ++k) {
      std::vector<double> raw(std::size_t{1} << k);
      for (double& a : raw) a = rng.next_double() * 6.0 - 3.0;
      const Circuit pattern = emit_multiplexor(axis, k, raw);

      const int n = k + 1;
      for (std::uint64_t basis = 0; basis < (std::uint64_t{1} << n); ++basis) {
        StateVector got(n, basis);
        got.apply(pattern);

        // Reference: rotate the target controlled on the select value.
        StateVector want(n, basis);
        const std::uint64_t v = basis >> 1;
        want.apply(GateOp{axis, {k}, {}, raw[v]});

        EXPECT_LT(qtest::max_abs_diff(got, want), 1e-12)
            << kind_name(axis) << " k=" << k << " basis=" << basis;
      }
    }
  }
}

TEST(SynthesizeInit, SingleQubitIsOneRyOneRz) {
  Rng rng(5);
  const StateVector target = qtest::random_state(1, rng);
  const SynthesisReport report = synthesize_init(target);
  EXPECT_EQ(report.ry_count, 1);
  EXPECT_EQ(report.rz_count, 1);
  EXPECT_EQ(report.cx_count, 0);
  EXPECT_EQ(report.total_depth, 2);
  EXPECT_GT(qtest::fidelity(target, prepare(report)), 1.0 - 1e-10);
}

TEST(SynthesizeInit, CountAndDepthFormulasHoldThroughTwelveQubits) {
  // Angles do not change the structure; any normalized target works.
  for (int n = 1; n <= 12; ++n) {
    Rng rng(static_cast<std::uint64_t>(100 + n));
    const SynthesisReport report = synthesize_init(qtest::random_amplitudes(n, rng));
    const std::int64_t pow2 = std::int64_t{1} << n;
    EXPECT_EQ(report.ry_count, pow2 - 1) << n;
    EXPECT_EQ(report.rz_count, pow2 - 1) << n;
    EXPECT_EQ(report.cx_count, 2 * pow2 - 2 * (n + 1)) << n;
    EXPECT_EQ(report.rotation_depth, 2 * pow2 - (n + 1)) << n;
    EXPECT_EQ(report.cx_depth, 2 * pow2 - 2 * (n + 1)) << n;
    EXPECT_EQ(report.total_depth, report.rotation_depth + report.cx_depth) << n;
  }
}

TEST(SynthesizeInit, ThreeQubitReferenceNumbers) {
  Rng rng(9);
  const SynthesisReport report = synthesize_init(qtest::random_amplitudes(3, rng));
  EXPECT_EQ(report.ry_count, 7);
  EXPECT_EQ(report.rz_count, 7);
  EXPECT_EQ(report.cx_count, 8);
  EXPECT_EQ(report.rotation_depth, 12);
  EXPECT_EQ(report.cx_depth, 8);
  EXPECT_EQ(report.total_depth, 20);
}

TEST(SynthesizeInit, FidelityOnRandomTargets) {
  for (int n = 1; n <= 8; ++n) {
    Rng rng(static_cast<std::uint64_t>(200 + n));
    for (int trial = 0; trial < 10; ++trial) {
      const StateVector target = qtest::random_state(n, rng);
      const SynthesisReport report = synthesize_init(target);
      EXPECT_GT(qtest::fidelity(target, prepare(report)), 1.0 - 1e-10) << n;
    }
  }
}

TEST(SynthesizeInit, EdgeTargetsBasisUniformAndZeroSubtrees) {
  // Basis states.
  for (int n : {2, 4}) {
    for (std::uint64_t k : {std::uint64_t{0}, (std::uint64_t{1} << n) - 1}) {
      std::vector<Complex> amps(std::size_t{1} << n, Complex{0.0, 0.0});
      amps[k] = Complex{1.0, 0.0};
      const SynthesisReport report = synthesize_init(amps);
      const StateVector target = StateVector::from_amplitudes(amps);
      EXPECT_GT(qtest::fidelity(target, prepare(report)), 1.0 - 1e-10);
      for (const GateOp& g : report.circuit.gates) EXPECT_TRUE(std::isfinite(g.angle));
    }
  }

  // Uniform superposition.
  {
    std::vector<Complex> amps(16, Complex{0.25, 0.0});
    const SynthesisReport report = synthesize_init(amps);
    EXPECT_GT(qtest::fidelity(StateVector::from_amplitudes(amps), prepare(report)), 1.0 - 1e-10);
  }

  // Whole zero subtree (all amplitudes with qubit0 = 1 vanish) plus phases.
  {
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<Complex> amps(8, Complex{0.0, 0.0});
    amps[0] = Complex{r, 0.0};
    amps[3] = Complex{0.0, r};
    const SynthesisReport report = synthesize_init(amps);
    for (const GateOp& g : report.circuit.gates) EXPECT_TRUE(std::isfinite(g.angle));
    EXPECT_GT(qtest::fidelity(StateVector::from_amplitudes(amps), prepare(report)), 1.0 - 1e-10);
  }
}

TEST(SynthesizeInit, RejectsUnnormalizedTargets) {
  std::vector<Complex> amps(4, Complex{0.5, 0.0});
  amps[0] = Complex{0.9, 0.0};
  EXPECT_THROW(synthesize_init(amps), UnnormalizedTarget);
  EXPECT_THROW(synthesize_init(std::vector<Complex>(3, Complex{0.5, 0.0})), NotPowerOfTwo);
}

TEST(SynthesizeInit, EmittedLayersAreSingleKind) {
  // Every ASAP layer of the synthesized circuit holds rotations only or
  // CX gates only; the depth split relies on this.
  Rng rng(33);
  const SynthesisReport report = synthesize_init(qtest::random_amplitudes(5, rng));
  const DepthReport depths = depth_profile(report.circuit);
  EXPECT_EQ(depths.rotation + depths.cx, depths.total);
}

TEST(RuntimeEstimate, MatchesClosedFormAnchors) {
  // n=1: two rotation layers, no CX.
  const RuntimeEstimate tiny = runtime_estimate(1, kBaselineGateTimes);
  EXPECT_NEAR(tiny.seconds, 100e-9, 1e-18);

  const RuntimeEstimate ten = runtime_estimate(10, kBaselineGateTimes);
  EXPECT_EQ(ten.rotation_depth, 2037);
  EXPECT_EQ(ten.cx_depth, 2026);
  EXPECT_NEAR(ten.seconds / 1e-9, 507050.0, 507050.0 * 1e-12);

  const RuntimeEstimate sherbrooke = runtime_estimate(10, kSherbrookeGateTimes);
  EXPECT_NEAR(sherbrooke.seconds / 1e-9, 1196415.551, 1196415.551 * 1e-9);
}

TEST(RuntimeEstimate, StrictlyIncreasingInArguments) {
  double prev = 0.0;
  for (int n = 1; n <= 12; ++n) {
    const double v = runtime_estimate(n, kBaselineGateTimes).seconds;
    EXPECT_GT(v, prev);
    prev = v;
  }
  const GateTimeProfile slower_1q{60e-9, 200e-9, {}};
  const GateTimeProfile slower_cx{50e-9, 210e-9, {}};
  EXPECT_GT(runtime_estimate(5, slower_1q).seconds, runtime_estimate(5, kBaselineGateTimes).seconds);
  EXPECT_GT(runtime_estimate(5, slower_cx).seconds, runtime_estimate(5, kBaselineGateTimes).seconds);
}

TEST(RuntimeEstimate, BudgetRatioReported) {
  GateTimeProfile profile = kBaselineGateTimes;
  profile.coherence_budget = 1e-3;
  const RuntimeEstimate est = runtime_estimate(10, profile);
  ASSERT_TRUE(est.budget_ratio.has_value());
  EXPECT_NEAR(*est.budget_ratio, est.seconds / 1e-3, 1e-15);
}

}  // namespace
