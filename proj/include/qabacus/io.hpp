#pragma once

// File formats: gate descriptions, schedule and qubit-program JSON, and the
// CSV tables written by the command-line tool. Numbers are written with 17
// significant digits so that re-reading reproduces them exactly.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qabacus/abacus.hpp"
#include "qabacus/evolve.hpp"
#include "qabacus/pointint.hpp"

namespace qabacus::io {

using json = nlohmann::json;

/// Parses "I", "-I", "NOT", "HADAMARD", "SIGMA1/2/3", "BLOCH(mu,nu)" (radians),
/// or a matrix given as four [re, im] entries in row-major order, flat or as
/// two rows. Throws ParseError.
UnitaryGate parse_gate(const json& j);
/// A gate name, or a JSON matrix when the text starts with '['.
UnitaryGate parse_gate(const std::string& text);
inline UnitaryGate parse_gate(const char* text) { return parse_gate(std::string(text)); }
json gate_to_json(const UnitaryGate& u);

PhysicalConfig parse_config(const json& j);
json config_to_json(const PhysicalConfig& cfg);

/// {config, steps: [{kind, gate, V_plus, V_minus, V_zero,
/// duration_half_periods, label}]}. Besides "gate_half_period" and
/// "closed_with_potentials" a step may be {"kind": "compiled", "gate": U},
/// which expands through compile_gate and multiplies the schedule's
/// phase_offset.
Schedule parse_schedule(const json& j);
json schedule_to_json(const Schedule& s);

/// Reads a whole file; ParseError when it cannot be opened or is not JSON.
json read_json_file(const std::string& path);

std::string format_double(double x);

void write_state_csv(std::ostream& os, const GridState& s);
void write_spectrum_csv(std::ostream& os, const SpectrumResult& r);
void write_scatter_csv(std::ostream& os, const std::vector<ScatteringAmplitudes>& rows);

json readout_to_json(const Readout& r);
json complex_to_json(cplx z);

struct ProgramOptions {
  PhysicalConfig cfg;
  Grid grid;
  EngineOptions engine;
  ProfileSpec profile;
  double threshold = kDefaultThreshold;
};

/// Qubit programs: a JSON list of {op, args} with op one of
///   prepare {register, bit} or {register, alpha: [re, im], beta: [re, im]}
///   gate    {register, gate}          compiled with compile_gate
///   cnot    {control, target}         trigger CNOT
///   readout {register}
/// Args may also be written inline next to "op". An object with an "ops"
/// list (and optional "config", "profile", "threshold") is accepted too;
/// its settings override `defaults`.
struct ProgramResult {
  json results;  // {readouts, cnot, phase_log}
  std::map<std::string, QubitState> registers;
};

ProgramResult run_program(const json& program, const ProgramOptions& defaults);

}  // namespace qabacus::io
