#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "qencost/branch_state.hpp"
#include "qencost/lbm.hpp"
#include "qencost/rng.hpp"
#include "qencost/state_vector.hpp"

namespace qencost {
namespace {

LbmField random_field(Rng& rng, int nx, const std::vector<int>& q_f) {
  LbmField field(static_cast<std::size_t>(nx));
  for (auto& point : field) {
    for (int bits : q_f) point.push_back(rng.next_below(std::uint64_t{1} << bits));
  }
  return field;
}

std::vector<std::uint64_t> center_values(const LbmConfig& config, const TruthTable& table,
                                         const BranchState& state, std::uint64_t branch) {
  const LbmLayout layout = lbm_layout(config, collision_ancilla_width(config, table));
  return offset_point_values(layout, state.bits(branch), 0);
}

TEST(QubitBudget, MatchesWorkedExamples) {
  EXPECT_EQ(qubit_budget(LbmConfig{4, 2, {1, 1}, 1, AncillaMode::Full, {}}), 14);
  EXPECT_EQ(qubit_budget(LbmConfig{8, 3, {2, 2, 2}, 2, AncillaMode::Full, {}}), 93);
  // Degenerate single-point grid with no steps: just the field registers.
  EXPECT_EQ(qubit_budget(LbmConfig{1, 2, {2, 2}, 0, AncillaMode::Full, {}}), 4);

  const TruthTable bgk2 = bgk_collision_table(2, 1);
  EXPECT_EQ(qubit_budget(LbmConfig{4, 2, {1, 1}, 1, AncillaMode::Full, {}}, bgk2), 14);
}

TEST(QubitBudget, OptimizedModeNeverExceedsFullMode) {
  const TruthTable bgk2 = bgk_collision_table(2, 2);
  const LbmConfig full{4, 2, {2, 2}, 1, AncillaMode::Full, {}};
  const LbmConfig optimized{4, 2, {2, 2}, 1, AncillaMode::Optimized, {}};
  EXPECT_LE(qubit_budget(optimized, bgk2), qubit_budget(full, bgk2));
  EXPECT_THROW(qubit_budget(optimized), DomainError);
}

TEST(QubitBudget, MatchesAllocatedRegisters) {
  const TruthTable bgk2 = bgk_collision_table(2, 1);
  for (AncillaMode mode : {AncillaMode::Full, AncillaMode::Optimized}) {
    const LbmConfig config{4, 2, {1, 1}, 1, mode, {}};
    const LbmField field(4, {0, 1});
    const BranchState state = build_initial_state(config, field, bgk2);
    EXPECT_EQ(state.top_qubits() + state.bottom_qubits(), qubit_budget(config, bgk2));
  }
}

TEST(BuildInitialState, UniformTwoPointShape) {
  const LbmConfig config{2, 2, {1, 1}, 1, AncillaMode::Full, {}};
  const TruthTable bgk2 = bgk_collision_table(2, 1);
  const LbmField field = {{1, 0}, {0, 1}};
  const BranchState state = build_initial_state(config, field, bgk2);
  const LbmLayout layout = lbm_layout(config, 2);

  ASSERT_EQ(state.branch_count(), 2u);
  EXPECT_NEAR(std::abs(state.amplitude(0)), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(std::abs(state.amplitude(1)), 1.0 / std::sqrt(2.0), 1e-12);
  for (std::uint64_t branch = 0; branch < 2; ++branch) {
    for (int o = -1; o <= 1; ++o) {
      const int point = ((static_cast<int>(branch) + o) % 2 + 2) % 2;
      EXPECT_EQ(offset_point_values(layout, state.bits(branch), o),
                field[static_cast<std::size_t>(point)]);
      EXPECT_EQ(offset_subblock(layout, state.bits(branch), o, 0), 0u);
    }
  }
}

TEST(BuildInitialState, SingleAmplitudeCollapsesToOneBranch) {
  LbmConfig config{4, 2, {1, 1}, 1, AncillaMode::Full, {}};
  config.top_amplitudes = std::vector<Complex>{{1, 0}, {0, 0}, {0, 0}, {0, 0}};
  const TruthTable bgk2 = bgk_collision_table(2, 1);
  const BranchState state = build_initial_state(config, LbmField(4, {1, 1}), bgk2);
  EXPECT_NEAR(std::abs(state.amplitude(0)), 1.0, 1e-15);
  for (std::uint64_t branch = 1; branch < 4; ++branch) {
    EXPECT_EQ(state.amplitude(branch), Complex(0.0, 0.0));
  }
}

TEST(BuildInitialState, DenseEmbeddingIsNormalized) {
  const LbmConfig config{4, 2, {1, 1}, 1, AncillaMode::Full, {}};
  const TruthTable bgk2 = bgk_collision_table(2, 1);
  Rng rng(411);
  const BranchState state = build_initial_state(config, random_field(rng, 4, {1, 1}), bgk2);
  EXPECT_NEAR(state.to_state_vector().norm_sq(), 1.0, 1e-12);
}

TEST(BuildInitialState, RejectsBadInputs) {
  const TruthTable bgk2 = bgk_collision_table(2, 1);
  const LbmConfig config{2, 2, {1, 1}, 1, AncillaMode::Full, {}};
  EXPECT_THROW(build_initial_state(config, {{2, 0}, {0, 0}}, bgk2), ValueOutOfRange);
  EXPECT_THROW(build_initial_state(config, {{0, 0}}, bgk2), WidthMismatch);

  LbmConfig unnormalized = config;
  unnormalized.top_amplitudes = std::vector<Complex>{{1, 0}, {1, 0}};
  EXPECT_THROW(build_initial_state(unnormalized, {{0, 0}, {0, 0}}, bgk2), UnnormalizedTarget);

  LbmConfig bad = config;
  bad.q_f = {1};
  EXPECT_THROW(validate_lbm_config(bad), WidthMismatch);
  bad = config;
  bad.q = 4;
  EXPECT_THROW(validate_lbm_config(bad), DomainError);
}

TEST(BgkTable, RowsConserveMassExactly) {
  for (const auto& [q, bits] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}}) {
    const TruthTable table = bgk_collision_table(q, bits);
    const std::vector<int> widths(static_cast<std::size_t>(q), bits);
    for (std::uint64_t in = 0; in < table.map.size(); ++in) {
      std::uint64_t mass_in = 0, mass_out = 0;
      for (std::uint64_t v : unpack_point(in, widths)) mass_in += v;
      for (std::uint64_t v : unpack_point(table.map[in], widths)) mass_out += v;
      EXPECT_EQ(mass_out, mass_in) << "q=" << q << " bits=" << bits << " row=" << in;
    }
  }
}

TEST(BgkTable, RelaxationIsIdempotent) {
  // One application reaches the quantized equilibrium; a second one must
  // not move it.
  for (const auto& [q, bits] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}}) {
    const TruthTable table = bgk_collision_table(q, bits);
    for (std::uint64_t in = 0; in < table.map.size(); ++in) {
      EXPECT_EQ(table.map[table.map[in]], table.map[in]);
    }
  }
}

TEST(LbmStep, ConstantEquilibriumFieldIsAFixedPoint) {
  const LbmConfig config{4, 2, {2, 2}, 1, AncillaMode::Full, {}};
  const TruthTable bgk2 = bgk_collision_table(2, 2);
  const std::vector<std::uint64_t> equilibrium = {1, 2};  // total mass 3
  ASSERT_EQ(bgk2.map[pack_point(equilibrium, {2, 2})], pack_point(equilibrium, {2, 2}));

  const BranchState before = build_initial_state(config, LbmField(4, equilibrium), bgk2);
  const BranchState after = lbm_step(before, config, bgk2, 0);
  for (std::uint64_t branch = 0; branch < 4; ++branch) {
    EXPECT_EQ(center_values(config, bgk2, after, branch), equilibrium);
  }
}

TEST(LbmStep, CenterMatchesClassicalReference) {
  const LbmConfig config{4, 2, {1, 1}, 1, AncillaMode::Full, {}};
  const TruthTable bgk2 = bgk_collision_table(2, 1);
  Rng rng(7120);
  for (int trial = 0; trial < 20; ++trial) {
    const LbmField field = random_field(rng, 4, {1, 1});
    const BranchState stepped =
        lbm_step(build_initial_state(config, field, bgk2), config, bgk2, 0);
    const LbmField reference = classical_lbm_step(field, config, bgk2);
    for (std::uint64_t branch = 0; branch < 4; ++branch) {
      EXPECT_EQ(center_values(config, bgk2, stepped, branch), reference[branch])
          << "trial " << trial << " branch " << branch;
    }
  }
}

TEST(LbmStep, TwoStepsMatchClassicalReference) {
  const LbmConfig config{4, 3, {1, 1, 1}, 2, AncillaMode::Full, {}};
  const TruthTable bgk3 = bgk_collision_table(3, 1);
  Rng rng(7121);
  for (int trial = 0; trial < 10; ++trial) {
    const LbmField field = random_field(rng, 4, {1, 1, 1});
    BranchState state = build_initial_state(config, field, bgk3);
    state = lbm_step(state, config, bgk3, 0);
    state = lbm_step(state, config, bgk3, 1);
    const LbmField reference = classical_lbm_step(classical_lbm_step(field, config, bgk3),
                                                  config, bgk3);
    // Only the central point survives the validity cascade after t steps;
    // outer offsets hold garbage and are deliberately not compared.
    for (std::uint64_t branch = 0; branch < 4; ++branch) {
      EXPECT_EQ(center_values(config, bgk3, state, branch), reference[branch])
          << "trial " << trial << " branch " << branch;
    }
  }
}

TEST(LbmStep, FullModeKeepsPreCollisionHistory) {
  const LbmConfig config{4, 3, {1, 1, 1}, 2, AncillaMode::Full, {}};
  const TruthTable bgk3 = bgk_collision_table(3, 1);
  const LbmLayout layout = lbm_layout(config, collision_ancilla_width(config, bgk3));
  Rng rng(7122);
  const LbmField field = random_field(rng, 4, {1, 1, 1});

  BranchState state = build_initial_state(config, field, bgk3);
  state = lbm_step(state, config, bgk3, 0);
  const LbmField after_one = classical_lbm_step(field, config, bgk3);
  state = lbm_step(state, config, bgk3, 1);

  for (std::uint64_t branch = 0; branch < 4; ++branch) {
    // Sub-block 0 of the center offset holds the initial field, sub-block 1
    // the field right before the second collision.
    EXPECT_EQ(offset_subblock(layout, state.bits(branch), 0, 0),
              pack_point(field[branch], config.q_f));
    EXPECT_EQ(offset_subblock(layout, state.bits(branch), 0, 1),
              pack_point(after_one[branch], config.q_f));
  }
}

TEST(LbmStep, OptimizedModeMatchesClassicalReference) {
  const LbmConfig config{4, 2, {1, 1}, 1, AncillaMode::Optimized, {}};
  const TruthTable bgk2 = bgk_collision_table(2, 1);
  Rng rng(7123);
  for (int trial = 0; trial < 10; ++trial) {
    const LbmField field = random_field(rng, 4, {1, 1});
    const BranchState stepped =
        lbm_step(build_initial_state(config, field, bgk2), config, bgk2, 0);
    const LbmField reference = classical_lbm_step(field, config, bgk2);
    for (std::uint64_t branch = 0; branch < 4; ++branch) {
      EXPECT_EQ(center_values(config, bgk2, stepped, branch), reference[branch]);
    }
  }
}

TEST(LbmStep, BranchAndDenseRoutesAgree) {
  const LbmConfig config{4, 2, {1, 1}, 1, AncillaMode::Full, {}};
  const TruthTable bgk2 = bgk_collision_table(2, 1);
  Rng rng(7124);
  const LbmField field = random_field(rng, 4, {1, 1});
  const BranchState initial = build_initial_state(config, field, bgk2);
  ASSERT_LE(initial.top_qubits() + initial.bottom_qubits(), 16);

  const Circuit step = lbm_step_circuit(config, bgk2, 0);
  const BranchState stepped = lbm_step(initial, config, bgk2, 0);

  std::vector<int> lifted(static_cast<std::size_t>(step.num_qubits));
  for (std::size_t i = 0; i < lifted.size(); ++i) {
    lifted[i] = initial.top_qubits() + static_cast<int>(i);
  }
  StateVector dense = initial.to_state_vector();
  dense.apply(remap_circuit(step, lifted, dense.num_qubits()));

  const StateVector via_branch = stepped.to_state_vector();
  ASSERT_EQ(dense.dim(), via_branch.dim());
  for (std::uint64_t k = 0; k < dense.dim(); ++k) {
    EXPECT_NEAR(std::abs(dense.amplitude(k) - via_branch.amplitude(k)), 0.0, 1e-12);
  }
}

TEST(LbmStream, WindowFoldRestoresBlock) {
  // Window size equals the grid size here, so rotating each velocity class
  // grid-size many times is the identity on the whole block. Unequal
  // register widths catch off-by-one bit-range bugs.
  const LbmConfig config{3, 2, {2, 1}, 1, AncillaMode::Full, {}};
  TruthTable identity{3, 3, {}};
  for (std::uint64_t v = 0; v < 8; ++v) identity.map.push_back(v);
  const LbmLayout layout = lbm_layout(config, collision_ancilla_width(config, identity));
  Rng rng(7125);
  const LbmField field = random_field(rng, 3, {2, 1});

  const BranchState original = build_initial_state(config, field, identity);
  BranchState rotated = original;
  for (int velocity_class = 0; velocity_class < 2; ++velocity_class) {
    const Circuit rotation = lbm_stream_circuit(config, layout, 0, velocity_class);
    for (int fold = 0; fold < 3; ++fold) rotated.apply(rotation);
  }
  EXPECT_EQ(rotated.branch_bitstrings(), original.branch_bitstrings());
}

TEST(LbmStep, ClassicalStreamingConservesGlobalMass) {
  const LbmConfig config{5, 3, {2, 2, 2}, 1, AncillaMode::Full, {}};
  const TruthTable bgk3 = bgk_collision_table(3, 2);
  Rng rng(7126);
  LbmField field = random_field(rng, 5, {2, 2, 2});
  std::uint64_t mass = 0;
  for (const auto& point : field)
    for (std::uint64_t v : point) mass += v;
  for (int s = 0; s < 4; ++s) {
    field = classical_lbm_step(field, config, bgk3);
    std::uint64_t now = 0;
    for (const auto& point : field)
      for (std::uint64_t v : point) now += v;
    EXPECT_EQ(now, mass);
  }
}

TEST(LbmReadout, DegenerateAmplitudeAlwaysHitsItsBranch) {
  LbmConfig config{4, 2, {1, 1}, 1, AncillaMode::Full, {}};
  config.top_amplitudes = std::vector<Complex>{{0, 0}, {0, 0}, {1, 0}, {0, 0}};
  const TruthTable bgk2 = bgk_collision_table(2, 1);
  const BranchState state = build_initial_state(config, LbmField(4, {1, 0}), bgk2);
  const auto observations = lbm_readout(state, 100, 99);
  ASSERT_EQ(observations.size(), 1u);
  EXPECT_EQ(observations[0].grid_point, 2u);
  EXPECT_EQ(observations[0].count, 100);
  EXPECT_EQ(observations[0].bits, state.bits(2));
}

TEST(LbmReadout, UniformFrequenciesWithinThreeSigma) {
  const LbmConfig config{4, 2, {1, 1}, 1, AncillaMode::Full, {}};
  const TruthTable bgk2 = bgk_collision_table(2, 1);
  const BranchState state = build_initial_state(config, LbmField(4, {1, 0}), bgk2);
  const std::int64_t shots = 40000;
  const auto observations = lbm_readout(state, shots, 4711);
  const double p = 0.25;
  const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
  ASSERT_EQ(observations.size(), 4u);
  for (const LbmObservation& obs : observations) {
    const double frequency = static_cast<double>(obs.count) / static_cast<double>(shots);
    EXPECT_NEAR(frequency, p, 3.0 * sigma) << "grid point " << obs.grid_point;
  }
}

TEST(LbmErrors, AncillaBlocksRunOut) {
  const LbmConfig config{4, 2, {1, 1}, 1, AncillaMode::Full, {}};
  const TruthTable bgk2 = bgk_collision_table(2, 1);
  const BranchState state = build_initial_state(config, LbmField(4, {1, 0}), bgk2);
  EXPECT_THROW(lbm_step(state, config, bgk2, 1), AncillaExhausted);
  EXPECT_THROW(lbm_step(state, config, bgk2, -1), AncillaExhausted);
}

TEST(LbmErrors, CollisionOnStaleOffsetIsRejected) {
  const LbmConfig config{4, 3, {1, 1, 1}, 2, AncillaMode::Full, {}};
  const TruthTable bgk3 = bgk_collision_table(3, 1);
  BranchState state = build_initial_state(config, LbmField(4, {0, 1, 0}), bgk3);
  state = lbm_step(state, config, bgk3, 0);
  // Offset 2 fell off the valid window after the first step.
  EXPECT_THROW(lbm_step(state, config, bgk3, 1, std::vector<int>{0, 2}), StaleDataRegion);
  EXPECT_NO_THROW(lbm_step(state, config, bgk3, 1, std::vector<int>{-1, 0, 1}));
}

TEST(LbmValidity, WindowShrinksByOneRingPerStep) {
  const LbmConfig config{8, 3, {1, 1, 1}, 2, AncillaMode::Full, {}};
  EXPECT_EQ(lbm_valid_offsets(config, 0), (std::vector<int>{-2, -1, 0, 1, 2}));
  EXPECT_EQ(lbm_valid_offsets(config, 1), (std::vector<int>{-1, 0, 1}));
  EXPECT_EQ(lbm_valid_offsets(config, 2), (std::vector<int>{0}));
}

}  // namespace
}  // namespace qencost
