#include "qabacus/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>

#include "qabacus/errors.hpp"

namespace qabacus::io {

namespace {

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  return s;
}

cplx parse_complex(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ParseError("expected a number or [re, im], got " + j.dump());
}

UnitaryGate checked(const Mat2& m) {
  try {
    return UnitaryGate(m);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("gate matrix is not unitary: ") + e.what());
  }
}

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return j[key].get<double>();
}

}  // namespace

UnitaryGate parse_gate(const std::string& text) {
  const std::string t = upper(text);
  if (!t.empty() && t.front() == '[') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError("gate matrix is not valid JSON: " + std::string(e.what()));
    }
    return parse_gate(j);
  }
  if (t == "I" || t == "+I" || t == "IDENTITY") return UnitaryGate::identity();
  if (t == "-I") return UnitaryGate::minus_identity();
  if (t == "NOT" || t == "X" || t == "SIGMA1") return UnitaryGate::sigma(1);
  if (t == "SIGMA2" || t == "Y") return UnitaryGate::sigma(2);
  if (t == "SIGMA3" || t == "Z") return UnitaryGate::sigma(3);
  if (t == "HADAMARD" || t == "H") return UnitaryGate::hadamard();
  static const std::regex bloch(R"(BLOCH\(([^,()]+),([^,()]+)\))");
  std::smatch m;
  if (std::regex_match(t, m, bloch)) {
    try {
      std::size_t used = 0;
      const double mu = std::stod(m[1].str(), &used);
      if (used != static_cast<std::size_t>(m[1].length())) throw std::invalid_argument("trailing");
      const double nu = std::stod(m[2].str(), &used);
      if (used != static_cast<std::size_t>(m[2].length())) throw std::invalid_argument("trailing");
      return bloch_matrix(mu, nu);
    } catch (const std::logic_error&) {
      throw ParseError("bad BLOCH arguments in '" + text + "'");
    }
  }
  throw ParseError("unknown gate '" + text + "'");
}

UnitaryGate parse_gate(const json& j) {
  if (j.is_string()) return parse_gate(j.get<std::string>());
  if (!j.is_array()) throw ParseError("gate must be a name or a matrix");
  Mat2 m{};
  if (j.size() == 4) {
    for (int k = 0; k < 4; ++k) m[k] = parse_complex(j[k]);
  } else if (j.size() == 2 && j[0].is_array() && j[0].size() == 2 && j[1].is_array() && j[1].size() == 2) {
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) m[2 * r + c] = parse_complex(j[r][c]);
  } else {
    throw ParseError("gate matrix must have four [re, im] entries");
  }
  return checked(m);
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json gate_to_json(const UnitaryGate& u) {
  json j = json::array();
  for (const cplx& z : u.matrix()) j.push_back(complex_to_json(z));
  return j;
}

PhysicalConfig parse_config(const json& j) {
  PhysicalConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) throw ParseError("config must be an object");
  c.mass = number(j, "mass", c.mass);
  c.omega = number(j, "omega", c.omega);
  c.hbar = number(j, "hbar", c.hbar);
  c.interface_length = number(j, "interface_length", c.interface_length);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid config: ") + e.what());
  }
  return c;
}

json config_to_json(const PhysicalConfig& cfg) {
  return {{"mass", cfg.mass}, {"omega", cfg.omega}, {"hbar", cfg.hbar}, {"interface_length", cfg.interface_length}};
}

Schedule parse_schedule(const json& j) {
  if (!j.is_object()) throw ParseError("schedule must be a JSON object");
  Schedule s;
  s.cfg = parse_config(j.value("config", json()));
  if (!j.contains("steps") || !j["steps"].is_array()) throw ParseError("schedule needs a 'steps' list");
  for (const json& st : j["steps"]) {
    if (!st.is_object() || !st.contains("kind") || !st["kind"].is_string()) {
      throw ParseError("every step needs a string 'kind'");
    }
    const std::string kind = st["kind"].get<std::string>();
    const std::string label = st.value("label", std::string());
    if (kind == "gate_half_period") {
      if (!st.contains("gate")) throw ParseError("gate_half_period step without 'gate'");
      s.steps.push_back(Step::gate(parse_gate(st["gate"]), label));
    } else if (kind == "closed_with_potentials") {
      bool neumann = false;
      if (st.contains("gate")) {
        const GateClass c = classify(parse_gate(st["gate"]));
        if (c == GateClass::plus_identity) {
          neumann = true;
        } else if (c != GateClass::minus_identity) {
          throw ParseError("closed_with_potentials steps use gate -I or I");
        }
      }
      const SidePotentials pot{number(st, "V_plus", 0.0), number(st, "V_minus", 0.0), number(st, "V_zero", 0.0)};
      const double d = number(st, "duration_half_periods", 1.0);
      if (!(d > 0.0)) throw ParseError("duration_half_periods must be positive");
      s.steps.push_back(Step::closed(pot, d, neumann, label));
    } else if (kind == "compiled") {
      if (!st.contains("gate")) throw ParseError("compiled step without 'gate'");
      const Schedule c = compile_gate(parse_gate(st["gate"]), s.cfg);
      for (Step step : c.steps) {
        if (!label.empty()) step.label = label + ": " + step.label;
        s.steps.push_back(std::move(step));
      }
      s.phase_offset *= c.phase_offset;
    } else {
      throw ParseError("unknown step kind '" + kind + "'");
    }
  }
  return s;
}

json schedule_to_json(const Schedule& s) {
  json steps = json::array();
  for (const Step& st : s.steps) {
    json j;
    if (const auto* g = std::get_if<GateHalfPeriod>(&st.action)) {
      j = {{"kind", "gate_half_period"}, {"gate", gate_to_json(g->gate)}};
    } else {
      const auto& c = std::get<ClosedWithPotentials>(st.action);
      j = {{"kind", "closed_with_potentials"},
           {"gate", c.neumann ? "I" : "-I"},
           {"V_plus", c.potentials.plus},
           {"V_minus", c.potentials.minus},
           {"V_zero", c.potentials.zero},
           {"duration_half_periods", c.duration_half_periods}};
    }
    if (!st.label.empty()) j["label"] = st.label;
    steps.push_back(std::move(j));
  }
  return {{"config", config_to_json(s.cfg)}, {"steps", steps}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_state_csv(std::ostream& os, const GridState& s) {
  os << "x,re_plus,im_plus,re_minus,im_minus\n";
  for (std::size_t j = 0; j < s.grid.nodes; ++j) {
    os << format_double(s.grid.x(j)) << ',' << format_double(s.plus[j].real()) << ','
       << format_double(s.plus[j].imag()) << ',' << format_double(s.minus[j].real()) << ','
       << format_double(s.minus[j].imag()) << '\n';
  }
}

void write_spectrum_csv(std::ostream& os, const SpectrumResult& r) {
  os << "index,E_over_hbar_omega,residual\n";
  for (std::size_t n = 0; n < r.levels.size(); ++n) {
    os << n << ',' << format_double(r.levels[n]) << ',' << format_double(r.residuals[n]) << '\n';
  }
}

void write_scatter_csv(std::ostream& os, const std::vector<ScatteringAmplitudes>& rows) {
  os << "k,T_left,R_left,T_right,R_right,unitarity_residual\n";
  for (const ScatteringAmplitudes& a : rows) {
    const double tl = std::norm(a.t_lr), rl = std::norm(a.r_lr);
    const double tr = std::norm(a.t_rl), rr = std::norm(a.r_rl);
    const double res = std::max(std::abs(tl + rl - 1.0), std::abs(tr + rr - 1.0));
    os << format_double(a.k) << ',' << format_double(tl) << ',' << format_double(rl) << ',' << format_double(tr)
       << ',' << format_double(rr) << ',' << format_double(res) << '\n';
  }
}

json readout_to_json(const Readout& r) {
  return {{"p0", r.p0}, {"p1", r.p1}, {"fidelity0", r.fidelity0}, {"fidelity1", r.fidelity1}, {"bit", r.bit()}};
}

namespace {

const json& args_of(const json& op) { return op.contains("args") ? op["args"] : op; }

std::string string_arg(const json& a, const char* key) {
  if (!a.contains(key) || !a[key].is_string()) throw ParseError(std::string("missing string argument '") + key + "'");
  return a[key].get<std::string>();
}

QubitState& lookup(std::map<std::string, QubitState>& regs, const std::string& name) {
  const auto it = regs.find(name);
  if (it == regs.end()) throw ParseError("register '" + name + "' used before prepare");
  return it->second;
}

}  // namespace

ProgramResult run_program(const json& program, const ProgramOptions& defaults) {
  ProgramOptions opt = defaults;
  const json* ops = &program;
  if (program.is_object()) {
    if (!program.contains("ops") || !program["ops"].is_array()) throw ParseError("program needs an 'ops' list");
    ops = &program["ops"];
    if (program.contains("config")) opt.cfg = parse_config(program["config"]);
    if (program.contains("profile")) opt.profile.kind = parse_profile_kind(program["profile"].get<std::string>());
    opt.threshold = number(program, "threshold", opt.threshold);
  } else if (!program.is_array()) {
    throw ParseError("program must be a list of operations");
  }

  const std::vector<double> profile = make_profile(opt.profile, opt.grid, opt.cfg);
  ProgramResult out;
  json readouts = json::array(), cnots = json::array(), phases = json::array();
  for (std::size_t index = 0; index < ops->size(); ++index) {
    const json& op = (*ops)[index];
    if (!op.is_object() || !op.contains("op") || !op["op"].is_string()) throw ParseError("every entry needs an 'op'");
    const std::string name = op["op"].get<std::string>();
    const json& a = args_of(op);
    if (name == "prepare") {
      const std::string reg = string_arg(a, "register");
      if (a.contains("alpha") || a.contains("beta")) {
        const cplx alpha = a.contains("alpha") ? parse_complex(a["alpha"]) : 0.0;
        const cplx beta = a.contains("beta") ? parse_complex(a["beta"]) : 0.0;
        if (alpha == 0.0 && beta == 0.0) throw ParseError("prepare with zero amplitudes");
        out.registers.insert_or_assign(reg, prepare_superposition(profile, opt.grid, alpha, beta));
      } else {
        const int bit = a.value("bit", 0);
        if (bit != 0 && bit != 1) throw ParseError("bit must be 0 or 1");
        out.registers.insert_or_assign(reg, prepare(profile, opt.grid, bit));
      }
    } else if (name == "gate") {
      const std::string reg = string_arg(a, "register");
      if (!a.contains("gate")) throw ParseError("gate op without 'gate'");
      QubitState& q = lookup(out.registers, reg);
      const Schedule s = compile_gate(parse_gate(a["gate"]), opt.cfg);
      QubitRun r = apply_schedule(q, s, opt.engine);
      q = std::move(r.qubit);
      phases.push_back({{"op", index},
                        {"register", reg},
                        {"steps", s.steps.size()},
                        {"phase_offset", complex_to_json(s.phase_offset)},
                        {"nominal_phase", complex_to_json(r.run.global_phase)}});
    } else if (name == "cnot") {
      const std::string c = string_arg(a, "control"), t = string_arg(a, "target");
      if (c == t) throw ParseError("cnot control and target must differ");
      CnotResult r = cnot_trigger(lookup(out.registers, c), lookup(out.registers, t), opt.cfg, opt.engine,
                                  opt.threshold);
      out.registers.insert_or_assign(c, std::move(r.control));
      out.registers.insert_or_assign(t, std::move(r.target));
      cnots.push_back({{"op", index}, {"control", c}, {"target", t}, {"applied", r.applied}});
      phases.push_back({{"op", index}, {"register", c}, {"phase_offset", complex_to_json(kI)}});
      phases.push_back({{"op", index}, {"register", t}, {"phase_offset", complex_to_json(r.applied ? -kI : kI)}});
    } else if (name == "readout") {
      const std::string reg = string_arg(a, "register");
      json j = readout_to_json(readout(lookup(out.registers, reg)));
      j["op"] = index;
      j["register"] = reg;
      readouts.push_back(std::move(j));
    } else {
      throw ParseError("unknown op '" + name + "'");
    }
  }
  out.results = {{"readouts", readouts}, {"cnot", cnots}, {"phase_log", phases}, {"threshold", opt.threshold}};
  return out;
}

}  // namespace qabacus::io
