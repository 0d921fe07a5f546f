#pragma once

#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qencost/circuit.hpp"
#include "qencost/errors.hpp"
#include "qencost/gates.hpp"
#include "qencost/rational.hpp"
#include "qencost/version.hpp"

namespace qencost {

using Json = nlohmann::ordered_json;

// Comma-separated table with a header row; cells are written verbatim, so
// callers format numbers themselves ('.' decimal separator throughout).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) {
    if (row.size() != header.size()) throw WidthMismatch("CSV row width differs from header");
    rows.push_back(std::move(row));
  }

  void write(std::ostream& out) const {
    const auto line = [&out](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
      }
      out << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
  }

  std::string str() const {
    std::ostringstream out;
    write(out);
    return out.str();
  }
};

// Everything needed to reproduce a run bit for bit: re-running the same
// manifest with the same tool version yields identical outputs.
struct RunManifest {
  std::string subcommand;
  Json parameters = Json::object();
  std::uint64_t seed = 0;
  bool seeded = false;
  std::string version = kVersion;
  std::vector<std::string> output_paths;

  Json to_json() const {
    Json j;
    j["subcommand"] = subcommand;
    j["version"] = version;
    if (seeded) j["seed"] = seed;
    j["parameters"] = parameters;
    j["outputs"] = output_paths;
    return j;
  }
};

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw Error("failed writing " + path);
}

// CSV outputs get a sibling manifest file; JSON outputs embed theirs.
inline void write_csv_with_manifest(const std::string& path, const CsvTable& table,
                                    const RunManifest& manifest) {
  write_text_file(path, table.str());
  write_text_file(path + ".manifest.json", manifest.to_json().dump(2) + "\n");
}

inline void write_json_with_manifest(const std::string& path, Json payload,
                                     const RunManifest& manifest) {
  payload["manifest"] = manifest.to_json();
  write_text_file(path, payload.dump(2) + "\n");
}

inline std::string rational_string(const Rational& value) {
  std::ostringstream out;
  out << numerator(value) << '/' << denominator(value);
  return out.str();
}

inline std::string format_double(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

inline Json gate_json(const GateOp& op) {
  Json j;
  j["kind"] = kind_name(op.kind);
  j["targets"] = op.targets;
  Json controls = Json::array();
  for (const ControlBit& c : op.controls) {
    controls.push_back(Json{{"qubit", c.qubit}, {"closed", c.closed}});
  }
  j["controls"] = controls;
  if (is_rotation(op.kind)) j["angle"] = op.angle;
  return j;
}

inline Json circuit_json(const Circuit& circuit) {
  Json j;
  j["num_qubits"] = circuit.num_qubits;
  Json gates = Json::array();
  for (const GateOp& op : circuit.gates) gates.push_back(gate_json(op));
  j["gates"] = gates;
  return j;
}

// One gate per line: KIND targets controls(polarity) angle.
inline std::string gate_line(const GateOp& op) {
  std::ostringstream out;
  out << kind_name(op.kind);
  for (int t : op.targets) out << ' ' << t;
  for (const ControlBit& c : op.controls) {
    out << ' ' << c.qubit << (c.closed ? "(closed)" : "(open)");
  }
  out << ' ' << format_double(op.angle);
  return out.str();
}

inline std::string circuit_gate_list(const Circuit& circuit) {
  std::ostringstream out;
  for (const GateOp& op : circuit.gates) out << gate_line(op) << '\n';
  return out.str();
}

}  // namespace qencost
