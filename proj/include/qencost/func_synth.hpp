#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "qencost/circuit.hpp"
#include "qencost/errors.hpp"

namespace qencost {

struct TruthTable {
  int d_in = 1;
  int d_out = 1;
  std::vector<std::uint64_t> map;  // size 2^d_in, entries < 2^d_out
};

inline void validate_table(const TruthTable& table) {
  if (table.d_in < 1 || table.d_in > 20) throw DomainError("input width must lie in [1, 20]");
  if (table.d_out < 1 || table.d_out > 20) throw DomainError("output width must lie in [1, 20]");
  if (table.map.size() != (std::size_t{1} << table.d_in)) {
    throw WidthMismatch("table must define every input");
  }
  for (std::uint64_t out : table.map) {
    if (out >> table.d_out) throw DomainError("table output exceeds the output width");
  }
}

struct Discretization {
  double phi = 2.0;
  int d = 3;

  std::int64_t levels() const { return (std::int64_t{1} << d) - 1; }
  double unit() const { return phi / static_cast<double>(levels()); }
};

// Tabulates f on the grid i * phi/L, i = 0..L with L = 2^d - 1, expressing
// each value as the nearest grid index (ties away from zero) and cutting
// off below 0 and above L.
inline TruthTable discretize(const std::function<double(double)>& f, const Discretization& disc) {
  if (disc.d < 1 || disc.d > 20) throw DomainError("bit width must lie in [1, 20]");
  if (!(disc.phi > 0.0)) throw DomainError("interval bound must be positive");
  const std::int64_t levels = disc.levels();
  const double unit = disc.unit();

  TruthTable table{disc.d, disc.d, {}};
  table.map.resize(std::size_t{1} << disc.d);
  for (std::int64_t i = 0; i <= levels; ++i) {
    const double value = f(static_cast<double>(i) * unit);
    if (!std::isfinite(value)) throw NonFiniteValue("function value at grid point is not finite");
    const double rounded = std::round(value / unit);
    std::int64_t index = 0;
    if (rounded >= static_cast<double>(levels)) {
      index = levels;
    } else if (rounded > 0.0) {
      index = static_cast<std::int64_t>(rounded);
    }
    table.map[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(index);
  }
  return table;
}

namespace detail {

// Digit p of a d-bit value, most significant digit first, matching the
// qubit that carries it.
inline int table_digit(std::uint64_t value, int position, int width) {
  return static_cast<int>((value >> (width - 1 - position)) & 1u);
}

}  // namespace detail

struct SynthOptions {
  bool emit_resets = true;
};

struct SynthesizedFunction {
  TruthTable table;
  Circuit circuit;                  // data on qubits 0..d-1, ancillas after
  std::vector<int> ancilla_digits;  // output digit served by each ancilla

  int data_width() const { return table.d_in; }
  int ancilla_count() const { return static_cast<int>(ancilla_digits.size()); }
};

// Plain pattern: majority-preset ancillas, one full-width MCX per (input,
// differing digit), SWAP the results into the data register, optionally
// reset the ancillas (each then holds one original data digit, so it is
// classical for any basis input).
inline SynthesizedFunction synth_naive(const TruthTable& table, SynthOptions options = {true}) {
  validate_table(table);
  if (table.d_out != table.d_in) throw WidthMismatch("in-place synthesis needs d_out == d_in");
  const int width = table.d_in;
  const std::int64_t rows = std::int64_t{1} << width;

  SynthesizedFunction result{table, Circuit(2 * width), {}};
  for (int p = 0; p < width; ++p) result.ancilla_digits.push_back(p);

  std::vector<int> preset(static_cast<std::size_t>(width), 0);
  for (int p = 0; p < width; ++p) {
    std::int64_t ones = 0;
    for (std::int64_t x = 0; x < rows; ++x) {
      ones += detail::table_digit(table.map[static_cast<std::size_t>(x)], p, width);
    }
    if (2 * ones > rows) {
      preset[static_cast<std::size_t>(p)] = 1;
      result.circuit.push(GateOp::x(width + p));
    }
  }

  for (std::int64_t x = 0; x < rows; ++x) {
    for (int p = 0; p < width; ++p) {
      const int want = detail::table_digit(table.map[static_cast<std::size_t>(x)], p, width);
      if (want == preset[static_cast<std::size_t>(p)]) continue;
      std::vector<ControlBit> controls;
      for (int q = 0; q < width; ++q) {
        controls.push_back(ControlBit{q, detail::table_digit(static_cast<std::uint64_t>(x), q, width) == 1});
      }
      result.circuit.push(GateOp::mcx(controls, width + p));
    }
  }

  for (int p = 0; p < width; ++p) result.circuit.push(GateOp::swap(p, width + p));
  if (options.emit_resets) {
    for (int p = 0; p < width; ++p) result.circuit.push(GateOp::reset(width + p));
  }
  return result;
}

// Correlation-aware pattern: output digits identical to their input digit
// across all rows keep their data qubit and get no gates; remaining digits
// get an ancilla seeded by majority preset or, when strictly more rows
// agree, by a CX copy of one input digit; leftover wrong rows are fixed by
// MCX gates whose controls are greedily narrowed while the covered subcube
// stays inside the still-wrong set.
inline SynthesizedFunction synth_optimized(const TruthTable& table, SynthOptions options = {false}) {
  validate_table(table);
  if (table.d_out != table.d_in) throw WidthMismatch("in-place synthesis needs d_out == d_in");
  const int width = table.d_in;
  const std::int64_t rows = std::int64_t{1} << width;
  const auto out_digit = [&](std::int64_t x, int p) {
    return detail::table_digit(table.map[static_cast<std::size_t>(x)], p, width);
  };
  const auto in_digit = [&](std::int64_t x, int p) {
    return detail::table_digit(static_cast<std::uint64_t>(x), p, width);
  };

  SynthesizedFunction result{table, Circuit(0), {}};
  std::vector<int> ancilla(static_cast<std::size_t>(width), -1);
  for (int p = 0; p < width; ++p) {
    bool identical = true;
    for (std::int64_t x = 0; x < rows && identical; ++x) {
      identical = out_digit(x, p) == in_digit(x, p);
    }
    if (identical) continue;
    ancilla[static_cast<std::size_t>(p)] = width + static_cast<int>(result.ancilla_digits.size());
    result.ancilla_digits.push_back(p);
  }
  result.circuit = Circuit(width + result.ancilla_count());

  // Pick each digit's seed: the majority preset, or a CX copy of the input
  // digit agreeing on strictly more rows (lowest digit on ties).
  std::vector<int> preset(static_cast<std::size_t>(width), 0);
  std::vector<int> seed_from(static_cast<std::size_t>(width), -1);
  for (int p = 0; p < width; ++p) {
    if (ancilla[static_cast<std::size_t>(p)] < 0) continue;
    std::int64_t ones = 0;
    for (std::int64_t x = 0; x < rows; ++x) ones += out_digit(x, p);
    const int majority = 2 * ones > rows ? 1 : 0;
    std::int64_t best = majority == 1 ? ones : rows - ones;
    preset[static_cast<std::size_t>(p)] = majority;
    for (int q = 0; q < width; ++q) {
      std::int64_t agreement = 0;
      for (std::int64_t x = 0; x < rows; ++x) {
        agreement += out_digit(x, p) == in_digit(x, q) ? 1 : 0;
      }
      if (agreement > best) {
        best = agreement;
        seed_from[static_cast<std::size_t>(p)] = q;
      }
    }
  }

  for (int p = 0; p < width; ++p) {
    if (ancilla[static_cast<std::size_t>(p)] < 0) continue;
    if (seed_from[static_cast<std::size_t>(p)] < 0 && preset[static_cast<std::size_t>(p)] == 1) {
      result.circuit.push(GateOp::x(ancilla[static_cast<std::size_t>(p)]));
    }
  }
  for (int p = 0; p < width; ++p) {
    if (ancilla[static_cast<std::size_t>(p)] < 0) continue;
    const int q = seed_from[static_cast<std::size_t>(p)];
    if (q >= 0) result.circuit.push(GateOp::cx(q, ancilla[static_cast<std::size_t>(p)]));
  }

  for (int p = 0; p < width; ++p) {
    if (ancilla[static_cast<std::size_t>(p)] < 0) continue;
    const int q = seed_from[static_cast<std::size_t>(p)];
    std::vector<bool> wrong(static_cast<std::size_t>(rows));
    for (std::int64_t x = 0; x < rows; ++x) {
      const int have = q >= 0 ? in_digit(x, q) : preset[static_cast<std::size_t>(p)];
      wrong[static_cast<std::size_t>(x)] = out_digit(x, p) != have;
    }
    for (std::int64_t x = 0; x < rows; ++x) {
      if (!wrong[static_cast<std::size_t>(x)]) continue;
      std::vector<bool> keep(static_cast<std::size_t>(width), true);
      for (int c = 0; c < width; ++c) {
        keep[static_cast<std::size_t>(c)] = false;
        bool coverable = true;
        for (std::int64_t y = 0; y < rows && coverable; ++y) {
          bool in_subcube = true;
          for (int b = 0; b < width && in_subcube; ++b) {
            in_subcube = !keep[static_cast<std::size_t>(b)] || in_digit(y, b) == in_digit(x, b);
          }
          if (in_subcube) coverable = wrong[static_cast<std::size_t>(y)];
        }
        if (!coverable) keep[static_cast<std::size_t>(c)] = true;
      }
      std::vector<ControlBit> controls;
      for (int b = 0; b < width; ++b) {
        if (keep[static_cast<std::size_t>(b)]) controls.push_back(ControlBit{b, in_digit(x, b) == 1});
      }
      const int target = ancilla[static_cast<std::size_t>(p)];
      if (controls.empty()) {
        result.circuit.push(GateOp::x(target));
      } else if (controls.size() == 1 && controls[0].closed) {
        result.circuit.push(GateOp::cx(controls[0].qubit, target));
      } else {
        result.circuit.push(GateOp::mcx(controls, target));
      }
      for (std::int64_t y = 0; y < rows; ++y) {
        bool in_subcube = true;
        for (int b = 0; b < width && in_subcube; ++b) {
          in_subcube = !keep[static_cast<std::size_t>(b)] || in_digit(y, b) == in_digit(x, b);
        }
        if (in_subcube) wrong[static_cast<std::size_t>(y)] = false;
      }
    }
  }

  for (int p = 0; p < width; ++p) {
    if (ancilla[static_cast<std::size_t>(p)] >= 0) {
      result.circuit.push(GateOp::swap(p, ancilla[static_cast<std::size_t>(p)]));
    }
  }
  if (options.emit_resets) {
    for (int p = 0; p < width; ++p) {
      if (ancilla[static_cast<std::size_t>(p)] >= 0) {
        result.circuit.push(GateOp::reset(ancilla[static_cast<std::size_t>(p)]));
      }
    }
  }
  return result;
}

}  // namespace qencost
