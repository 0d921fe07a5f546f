#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qencost/branch_state.hpp"
#include "qencost/circuit.hpp"
#include "qencost/errors.hpp"
#include "qencost/func_synth.hpp"
#include "qencost/state_vector.hpp"

namespace qencost {

enum class AncillaMode { Full, Optimized };

struct LbmConfig {
  int nx = 4;
  int q = 2;                       // stencil size (D1Qq)
  std::vector<int> q_f = {1, 1};   // bits per distribution function
  int t = 1;                       // time steps the block layout supports
  AncillaMode mode = AncillaMode::Full;
  std::optional<std::vector<Complex>> top_amplitudes;  // default uniform
};

// Unit lattice velocities, one per distribution function.
inline std::vector<int> stencil_velocities(int q) {
  if (q == 2) return {+1, -1};
  if (q == 3) return {0, +1, -1};
  throw DomainError("stencil size must be 2 or 3");
}

inline void validate_lbm_config(const LbmConfig& config) {
  if (config.nx < 1) throw DomainError("grid needs at least one point");
  stencil_velocities(config.q);
  if (static_cast<int>(config.q_f.size()) != config.q) {
    throw WidthMismatch("one register width per distribution function required");
  }
  for (int bits : config.q_f) {
    if (bits < 1 || bits > 16) throw DomainError("register width must lie in [1, 16]");
  }
  if (config.t < 0) throw DomainError("step budget must be non-negative");
}

inline int top_register_width(int nx) {
  int bits = 0;
  while ((std::int64_t{1} << bits) < nx) ++bits;
  return bits;
}

// Value packing within one grid point: f_0 occupies the most significant
// bits, each register itself most-significant-first, matching the qubit
// order of the stencil block and of the synthesized collision circuits.
inline std::uint64_t pack_point(const std::vector<std::uint64_t>& values,
                                const std::vector<int>& widths) {
  if (values.size() != widths.size()) throw WidthMismatch("one value per register required");
  std::uint64_t packed = 0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] >> widths[j]) throw ValueOutOfRange("field value exceeds its register width");
    packed = (packed << widths[j]) | values[j];
  }
  return packed;
}

inline std::vector<std::uint64_t> unpack_point(std::uint64_t packed, const std::vector<int>& widths) {
  std::vector<std::uint64_t> values(widths.size());
  for (std::size_t j = widths.size(); j-- > 0;) {
    values[j] = packed & ((std::uint64_t{1} << widths[j]) - 1);
    packed >>= widths[j];
  }
  return values;
}

// Bit positions inside a branch bitstring. One stencil block covers the
// offsets -t..t around the branch's grid point; each offset carries its
// f registers (ascending function index) followed by t ancilla sub-blocks.
struct LbmLayout {
  int t = 0;
  int window = 1;
  int point_bits = 0;
  int subblock_bits = 0;
  int per_offset = 0;
  int top_bits = 0;
  int bottom_bits = 0;
  std::vector<int> q_f;

  int offset_base(int offset) const { return (offset + t) * per_offset; }

  int f_base(int offset, int j) const {
    int base = offset_base(offset);
    for (int i = 0; i < j; ++i) base += q_f[i];
    return base;
  }

  int subblock_base(int offset, int s) const {
    return offset_base(offset) + point_bits + s * subblock_bits;
  }
};

// Field of a register inside an MSB-first bitstring of `total` bits.
inline std::uint64_t extract_bits(std::uint64_t bits, int total, int base, int width) {
  return (bits >> (total - base - width)) & ((std::uint64_t{1} << width) - 1);
}

inline std::uint64_t insert_bits(std::uint64_t bits, int total, int base, int width,
                                 std::uint64_t value) {
  const int shift = total - base - width;
  const std::uint64_t mask = ((std::uint64_t{1} << width) - 1) << shift;
  return (bits & ~mask) | (value << shift);
}

// Ancilla bits one collision application consumes: the full mode shadows
// every data bit, the optimized mode only the digits its synthesis really
// needs (reported, never assumed).
inline int collision_ancilla_width(const LbmConfig& config, const TruthTable& collision) {
  validate_lbm_config(config);
  int point_bits = 0;
  for (int bits : config.q_f) point_bits += bits;
  if (collision.d_in != point_bits || collision.d_out != point_bits) {
    throw WidthMismatch("collision table width must equal the summed register widths");
  }
  if (config.mode == AncillaMode::Full) return point_bits;
  return synth_optimized(collision).ancilla_count();
}

inline LbmLayout lbm_layout(const LbmConfig& config, int subblock_bits) {
  validate_lbm_config(config);
  LbmLayout layout;
  layout.t = config.t;
  layout.window = 1 + 2 * config.t;
  layout.q_f = config.q_f;
  for (int bits : config.q_f) layout.point_bits += bits;
  layout.subblock_bits = subblock_bits;
  layout.per_offset = layout.point_bits + config.t * subblock_bits;
  layout.top_bits = top_register_width(config.nx);
  layout.bottom_bits = layout.window * layout.per_offset;
  return layout;
}

inline std::int64_t qubit_budget(const LbmConfig& config, const TruthTable& collision) {
  const LbmLayout layout = lbm_layout(config, collision_ancilla_width(config, collision));
  return layout.top_bits + layout.bottom_bits;
}

// Full-mode budget straight from the widths: ceil(log2 Nx) plus
// (sum Q_f) * (1 + t) * (1 + 2t).
inline std::int64_t qubit_budget(const LbmConfig& config) {
  validate_lbm_config(config);
  if (config.mode != AncillaMode::Full) {
    throw DomainError("the optimized-mode budget needs the collision table");
  }
  int point_bits = 0;
  for (int bits : config.q_f) point_bits += bits;
  const LbmLayout layout = lbm_layout(config, point_bits);
  return layout.top_bits + layout.bottom_bits;
}

using LbmField = std::vector<std::vector<std::uint64_t>>;  // [point][function]

// One branch per grid point: amplitude a_i, bitstring holding the field of
// the points i-t..i+t (periodic wrap), ancillas zero.
inline BranchState build_initial_state(const LbmConfig& config, const LbmField& field,
                                       const TruthTable& collision) {
  const LbmLayout layout = lbm_layout(config, collision_ancilla_width(config, collision));
  if (static_cast<int>(field.size()) != config.nx) {
    throw WidthMismatch("one field entry per grid point required");
  }
  if (layout.bottom_bits > 63) throw QubitLimitExceeded("stencil block exceeds 63 qubits");
  if (layout.top_bits > dense_qubit_cap())
    throw QubitLimitExceeded("top register exceeds the dense amplitude cap");

  std::vector<Complex> amplitudes;
  if (config.top_amplitudes) {
    amplitudes = *config.top_amplitudes;
    if (static_cast<int>(amplitudes.size()) != config.nx) {
      throw WidthMismatch("one amplitude per grid point required");
    }
    double norm = 0.0;
    for (const Complex& a : amplitudes) norm += std::norm(a);
    if (std::abs(norm - 1.0) > 1e-10) throw UnnormalizedTarget("amplitudes must have unit norm");
  } else {
    amplitudes.assign(config.nx, Complex{1.0 / std::sqrt(config.nx), 0.0});
  }

  BranchState state(layout.top_bits, layout.bottom_bits);
  for (int i = 0; i < config.nx; ++i) {
    std::uint64_t bits = 0;
    for (int o = -config.t; o <= config.t; ++o) {
      const int point = ((i + o) % config.nx + config.nx) % config.nx;
      for (int j = 0; j < config.q; ++j) {
        if (field[point][j] >> config.q_f[j]) {
          throw ValueOutOfRange("field value exceeds its register width");
        }
        bits = insert_bits(bits, layout.bottom_bits, layout.f_base(o, j), config.q_f[j],
                           field[point][j]);
      }
    }
    state.set_branch(static_cast<std::uint64_t>(i), amplitudes[static_cast<std::size_t>(i)], bits);
  }
  return state;
}

// Offsets whose registers still hold genuine field data after steps_done
// steps: the rim loses one ring per step.
inline std::vector<int> lbm_valid_offsets(const LbmConfig& config, int steps_done) {
  validate_lbm_config(config);
  std::vector<int> offsets;
  const int reach = config.t - steps_done;
  for (int o = -reach; o <= reach; ++o) offsets.push_back(o);
  return offsets;
}

// Streaming for one velocity class: a cyclic rotation of that class's
// registers across the still-valid sub-window, realized as a chain of
// adjacent register SWAPs. Invalid rim offsets are left untouched.
inline Circuit lbm_stream_circuit(const LbmConfig& config, const LbmLayout& layout,
                                  int step_index, int velocity_class) {
  const std::vector<int> velocities = stencil_velocities(config.q);
  const int c = velocities.at(static_cast<std::size_t>(velocity_class));
  Circuit circuit(layout.bottom_bits);
  const int reach = config.t - step_index;
  const int width = config.q_f[static_cast<std::size_t>(velocity_class)];
  const auto swap_registers = [&](int a, int b) {
    for (int bit = 0; bit < width; ++bit) {
      circuit.push(GateOp::swap(layout.f_base(a, velocity_class) + bit,
                                layout.f_base(b, velocity_class) + bit));
    }
  };
  if (c > 0) {
    for (int o = reach; o > -reach; --o) swap_registers(o, o - 1);
  } else if (c < 0) {
    for (int o = -reach; o < reach; ++o) swap_registers(o, o + 1);
  }
  return circuit;
}

// One time step as a plain circuit: the collision network on every offset
// collided this step (default: all still-valid ones), each targeting its
// own copy of this step's fresh ancilla sub-block, followed by streaming.
inline Circuit lbm_step_circuit(const LbmConfig& config, const TruthTable& collision,
                                int step_index,
                                const std::optional<std::vector<int>>& collide_offsets = {}) {
  if (step_index < 0 || step_index >= config.t) {
    throw AncillaExhausted("no fresh ancilla sub-block for step " + std::to_string(step_index));
  }
  const SynthesizedFunction synthesized = config.mode == AncillaMode::Full
                                              ? synth_naive(collision, {false})
                                              : synth_optimized(collision, {false});
  const LbmLayout layout = lbm_layout(config, synthesized.ancilla_count());

  std::vector<int> offsets = collide_offsets.value_or(lbm_valid_offsets(config, step_index));
  Circuit circuit(layout.bottom_bits);
  for (int o : offsets) {
    if (o < -(config.t - step_index) || o > config.t - step_index) {
      throw StaleDataRegion("offset " + std::to_string(o) + " is invalid at step " +
                            std::to_string(step_index));
    }
    std::vector<int> qubit_map;
    for (int p = 0; p < layout.point_bits; ++p) qubit_map.push_back(layout.f_base(o, 0) + p);
    for (int a = 0; a < synthesized.ancilla_count(); ++a) {
      qubit_map.push_back(layout.subblock_base(o, step_index) + a);
    }
    circuit.append(remap_circuit(synthesized.circuit, qubit_map, layout.bottom_bits));
  }
  for (int j = 0; j < config.q; ++j) {
    circuit.append(lbm_stream_circuit(config, layout, step_index, j));
  }
  return circuit;
}

inline BranchState lbm_step(const BranchState& state, const LbmConfig& config,
                            const TruthTable& collision, int step_index,
                            const std::optional<std::vector<int>>& collide_offsets = {}) {
  BranchState next = state;
  next.apply(lbm_step_circuit(config, collision, step_index, collide_offsets));
  return next;
}

// BGK collision at relaxation time 1: every population jumps straight to
// the quantized equilibrium. The moving populations round half away from
// zero and the rest population absorbs the remainder, so the table is
// mass-exact row by row.
inline TruthTable bgk_collision_table(int q, int bits) {
  stencil_velocities(q);
  if (bits < 1 || bits > 8) throw DomainError("register width must lie in [1, 8]");
  const std::vector<int> widths(static_cast<std::size_t>(q), bits);
  const int width_total = q * bits;

  TruthTable table{width_total, width_total, {}};
  table.map.resize(std::size_t{1} << width_total);
  for (std::uint64_t input = 0; input < table.map.size(); ++input) {
    const std::vector<std::uint64_t> values = unpack_point(input, widths);
    std::uint64_t rho = 0;
    for (std::uint64_t v : values) rho += v;
    std::vector<std::uint64_t> equilibrium(static_cast<std::size_t>(q));
    if (q == 2) {
      equilibrium[1] = (rho + 1) / 2;
      equilibrium[0] = rho - equilibrium[1];
    } else {
      equilibrium[1] = (rho + 1) / 3;
      equilibrium[2] = equilibrium[1];
      equilibrium[0] = rho - equilibrium[1] - equilibrium[2];
    }
    table.map[input] = pack_point(equilibrium, widths);
  }
  return table;
}

// Classical reference update with the same collision table and periodic
// streaming; the quantum center offsets must match this exactly.
inline LbmField classical_lbm_step(const LbmField& field, const LbmConfig& config,
                                   const TruthTable& collision) {
  validate_lbm_config(config);
  const std::vector<int> velocities = stencil_velocities(config.q);
  const int nx = config.nx;
  LbmField collided(field.size());
  for (int x = 0; x < nx; ++x) {
    collided[static_cast<std::size_t>(x)] =
        unpack_point(collision.map.at(pack_point(field[static_cast<std::size_t>(x)], config.q_f)),
                     config.q_f);
  }
  LbmField streamed(field.size(), std::vector<std::uint64_t>(static_cast<std::size_t>(config.q)));
  for (int x = 0; x < nx; ++x) {
    for (int j = 0; j < config.q; ++j) {
      const int source = ((x - velocities[static_cast<std::size_t>(j)]) % nx + nx) % nx;
      streamed[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)] =
          collided[static_cast<std::size_t>(source)][static_cast<std::size_t>(j)];
    }
  }
  return streamed;
}

struct LbmObservation {
  std::uint64_t grid_point = 0;
  std::int64_t count = 0;
  std::uint64_t bits = 0;
};

// Samples the top register; every hit reveals one grid point's full block,
// including the pre-collision snapshots parked in the ancilla sub-blocks.
inline std::vector<LbmObservation> lbm_readout(const BranchState& state, std::int64_t shots,
                                               std::uint64_t seed) {
  const ShotHistogram histogram = state.sample_tops(shots, seed);
  std::vector<LbmObservation> observations;
  for (const auto& [top_index, count] : histogram.counts) {
    observations.push_back(LbmObservation{top_index, count, state.bits(top_index)});
  }
  return observations;
}

inline std::vector<std::uint64_t> offset_point_values(const LbmLayout& layout, std::uint64_t bits,
                                                      int offset) {
  std::vector<std::uint64_t> values;
  for (std::size_t j = 0; j < layout.q_f.size(); ++j) {
    values.push_back(extract_bits(bits, layout.bottom_bits,
                                  layout.f_base(offset, static_cast<int>(j)), layout.q_f[j]));
  }
  return values;
}

inline std::uint64_t offset_subblock(const LbmLayout& layout, std::uint64_t bits, int offset,
                                     int s) {
  return extract_bits(bits, layout.bottom_bits, layout.subblock_base(offset, s),
                      layout.subblock_bits);
}

}  // namespace qencost
