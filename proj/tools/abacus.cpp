// abacus: run schedules and qubit programs, print spectra and scattering
// tables, and run the acceptance suite.
//
// Exit codes: 0 success, 1 verification failure or internal error,
// 2 usage/parse error, 3 physics-contract violation, 4 accuracy failure.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qabacus/abacus.hpp"
#include "qabacus/errors.hpp"
#include "qabacus/evolve.hpp"
#include "qabacus/io.hpp"
#include "qabacus/pointint.hpp"
#include "qabacus/verify.hpp"

namespace fs = std::filesystem;
using namespace qabacus;
using io::json;

namespace {

struct RunArgs {
  std::string schedule, program;
  std::string engine = "modal";
  std::size_t grid_nodes = 2048;
  double xmax = 12.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::string out = "abacus_out";
  std::string profile = "bump";
  int bit = 0;
  int modes = kDefaultModes;
  std::string format = "csv";
  bool check_halving = false;
};

struct SpectrumArgs {
  std::optional<double> theta;
  std::string gate;
  int count = 10;
  std::string method = "analytic";
  int nodes_per_length = 256;
  double interface_length = 1.0;
  std::string out;
};

struct ScatterArgs {
  std::string gate = "HADAMARD";
  double kmin = 0.01, kmax = 100.0;
  int points = 50;
  double interface_length = 1.0;
  std::string out;
};

struct VerifyArgs {
  std::string level = "quick";
  std::uint64_t seed = VerifyOptions{}.seed;
  std::size_t grid_nodes = 2048;
  double xmax = 12.0;
  double dt = 0.0;
  std::vector<int> criteria;
  int threads = 0;
};

Engine parse_engine(const std::string& s) {
  if (s == "modal") return Engine::modal;
  if (s == "grid") return Engine::grid;
  throw ParseError("engine must be modal or grid");
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

std::string state_text(const GridState& s, const std::string& format) {
  std::ostringstream os;
  if (format == "csv") {
    io::write_state_csv(os, s);
  } else {
    json j{{"x_max", s.grid.x_max}, {"nodes", s.grid.nodes}};
    json plus = json::array(), minus = json::array();
    for (std::size_t k = 0; k < s.grid.nodes; ++k) {
      plus.push_back(io::complex_to_json(s.plus[k]));
      minus.push_back(io::complex_to_json(s.minus[k]));
    }
    j["plus"] = plus;
    j["minus"] = minus;
    os << j.dump() << '\n';
  }
  return os.str();
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

int cmd_run(const RunArgs& a) {
  if (a.schedule.empty() == a.program.empty()) throw ParseError("give exactly one of --schedule or --program");
  if (a.format != "csv" && a.format != "json") throw ParseError("format must be csv or json");
  if (a.grid_nodes < 16) throw ParseError("--grid-nodes must be at least 16");
  EngineOptions engine;
  engine.engine = parse_engine(a.engine);
  engine.modes = a.modes;
  engine.dt = a.dt;
  engine.check_step_halving = a.check_halving;
  ProfileSpec profile;
  profile.kind = parse_profile_kind(a.profile);
  if (a.bit != 0 && a.bit != 1) throw ParseError("--bit must be 0 or 1");

  const fs::path out(a.out);
  fs::create_directories(out);
  std::vector<std::string> files;
  json manifest{{"engine", to_string(engine.engine)}, {"modes", a.modes}, {"seed", a.seed}, {"profile", a.profile},
                {"check_step_halving", a.check_halving}};

  if (!a.program.empty()) {
    const json program = io::read_json_file(a.program);
    io::ProgramOptions opt;
    if (program.is_object() && program.contains("config")) opt.cfg = io::parse_config(program["config"]);
    opt.grid = Grid::standard(opt.cfg, a.xmax, a.grid_nodes);
    opt.engine = engine;
    opt.profile = profile;
    const io::ProgramResult r = io::run_program(program, opt);
    write_text(out / "results.json", r.results.dump(2) + "\n");
    files.push_back("results.json");
    manifest["kind"] = "program";
    manifest["config"] = io::config_to_json(opt.cfg);
    manifest["grid"] = {{"x_max", opt.grid.x_max}, {"nodes", opt.grid.nodes}};
    manifest["dt"] = engine.time_step(opt.cfg);
    manifest["threshold"] = r.results["threshold"];
    manifest["results"] = r.results;
  } else {
    const Schedule s = io::parse_schedule(io::read_json_file(a.schedule));
    const Grid grid = Grid::standard(s.cfg, a.xmax, a.grid_nodes);
    const QubitState q = prepare(profile, grid, s.cfg, a.bit);
    const QubitRun r = apply_schedule(q, s, engine);
    const std::string ext = a.format == "csv" ? ".csv" : ".json";
    write_text(out / ("step_000" + ext), state_text(q.state, a.format));
    files.push_back("step_000" + ext);
    json steps = json::array();
    for (std::size_t i = 0; i < r.run.trace.size(); ++i) {
      const Snapshot& snap = r.run.trace[i];
      char name[32];
      std::snprintf(name, sizeof name, "step_%03zu", i + 1);
      write_text(out / (name + ext), state_text(snap.state, a.format));
      files.push_back(name + ext);
      const Readout ro = readout({snap.state, q.profile});
      steps.push_back({{"label", snap.label},
                       {"file", name + ext},
                       {"norm", snap.norm},
                       {"p_plus", snap.p_plus},
                       {"p_minus", snap.p_minus},
                       {"profile_fidelity", {ro.fidelity0, ro.fidelity1}},
                       {"ideal_fidelity", snap.ideal_fidelity},
                       {"nominal_phase", io::complex_to_json(snap.nominal_phase)},
                       {"truncation_loss", snap.truncation_loss},
                       {"halving_discrepancy", snap.halving_discrepancy}});
    }
    manifest["kind"] = "schedule";
    manifest["config"] = io::config_to_json(s.cfg);
    manifest["grid"] = {{"x_max", grid.x_max}, {"nodes", grid.nodes}};
    manifest["dt"] = engine.time_step(s.cfg);
    manifest["bit"] = a.bit;
    manifest["schedule"] = io::schedule_to_json(s);
    manifest["phase_offset"] = io::complex_to_json(s.phase_offset);
    manifest["global_phase"] = io::complex_to_json(r.run.global_phase);
    manifest["steps"] = steps;
    manifest["final_readout"] = io::readout_to_json(readout(r.qubit));
  }
  files.push_back("manifest.json");
  manifest["files"] = files;
  write_text(out / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << files.size() << " files to " << out.string() << '\n';
  return 0;
}

int cmd_spectrum(const SpectrumArgs& a) {
  if (a.theta.has_value() == !a.gate.empty()) throw ParseError("give exactly one of --theta or --gate");
  PhysicalConfig cfg;
  cfg.interface_length = a.interface_length;
  cfg.validate();
  SpectrumResult r;
  if (a.method == "analytic") {
    r = a.theta ? robin_levels(*a.theta, cfg, a.count) : spectrum({io::parse_gate(a.gate), cfg.interface_length}, cfg, a.count);
  } else if (a.method == "fd") {
    const FdGrid fd{12.0, a.nodes_per_length};
    r = a.theta ? fd_oracle_levels(*a.theta, cfg, fd, a.count) : fd_oracle_levels(io::parse_gate(a.gate), cfg, fd, a.count);
  } else {
    throw ParseError("method must be analytic or fd");
  }
  std::ofstream f;
  io::write_spectrum_csv(open_out(a.out, f), r);
  return 0;
}

int cmd_scatter(const ScatterArgs& a) {
  if (!(a.kmin > 0.0) || !(a.kmax >= a.kmin) || a.points < 1) throw ParseError("need 0 < kmin <= kmax, points >= 1");
  const PointInteraction pi{io::parse_gate(a.gate), a.interface_length};
  std::vector<ScatteringAmplitudes> rows;
  for (int i = 0; i < a.points; ++i) {
    const double f = a.points == 1 ? 0.0 : static_cast<double>(i) / (a.points - 1);
    rows.push_back(scattering_amplitudes(pi, a.kmin * std::pow(a.kmax / a.kmin, f)));
  }
  std::ofstream f;
  io::write_scatter_csv(open_out(a.out, f), rows);
  return 0;
}

int cmd_verify(const VerifyArgs& a) {
  VerifyOptions o;
  if (a.level == "quick") {
    o.level = VerifyLevel::quick;
  } else if (a.level == "full") {
    o.level = VerifyLevel::full;
  } else {
    throw ParseError("level must be quick or full");
  }
  o.seed = a.seed;
  o.grid_nodes = a.grid_nodes;
  o.x_max_lengths = a.xmax;
  o.dt = a.dt;
  o.threads = a.threads;
  bool all = true;
  for (const CriterionResult& r : run_verification(o, a.criteria)) {
    std::cout << format_result(r) << '\n';
    all = all && r.pass;
  }
  std::cout << (all ? "all criteria passed" : "some criteria FAILED") << '\n';
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum abacus: point-interaction gates in a harmonic trap"};
  app.set_config("--config", "", "TOML/INI file with option defaults (flags override it)");
  app.require_subcommand(1);

  RunArgs run;
  auto* r = app.add_subcommand("run", "Run a schedule or qubit program and write snapshots + manifest");
  r->add_option("--schedule", run.schedule, "Schedule JSON");
  r->add_option("--program", run.program, "Qubit program JSON");
  r->add_option("--engine", run.engine, "modal or grid")->capture_default_str();
  r->add_option("--grid-nodes", run.grid_nodes, "Nodes per side")->capture_default_str();
  r->add_option("--xmax", run.xmax, "Grid extent in oscillator lengths")->capture_default_str();
  r->add_option("--dt", run.dt, "Grid-engine time step (0: tau/2000)")->capture_default_str();
  r->add_option("--seed", run.seed, "Seed recorded in the manifest")->capture_default_str();
  r->add_option("--out", run.out, "Output directory")->capture_default_str();
  r->add_option("--profile", run.profile, "bump or ground")->capture_default_str();
  r->add_option("--bit", run.bit, "Initial qubit for schedules")->capture_default_str();
  r->add_option("--modes", run.modes, "Modal truncation")->capture_default_str();
  r->add_option("--format", run.format, "Snapshot format: csv or json")->capture_default_str();
  r->add_flag("--check-halving", run.check_halving, "Grid engine: rerun at dt/2 and fail on disagreement");

  SpectrumArgs sp;
  auto* s = app.add_subcommand("spectrum", "Energy levels (units of hbar omega) as CSV");
  s->add_option("--theta", sp.theta, "Robin eigenphase of one half line");
  s->add_option("--gate", sp.gate, "Gate name or JSON matrix");
  s->add_option("--count", sp.count, "Number of levels")->capture_default_str();
  s->add_option("--method", sp.method, "analytic or fd")->capture_default_str();
  s->add_option("--nodes-per-length", sp.nodes_per_length, "fd resolution")->capture_default_str();
  s->add_option("--interface-length", sp.interface_length, "L0")->capture_default_str();
  s->add_option("--out", sp.out, "CSV file (default stdout)");

  ScatterArgs sc;
  auto* c = app.add_subcommand("scatter", "Free-line transmission/reflection vs k as CSV");
  c->add_option("--gate", sc.gate, "Gate name or JSON matrix")->capture_default_str();
  c->add_option("--kmin", sc.kmin)->capture_default_str();
  c->add_option("--kmax", sc.kmax)->capture_default_str();
  c->add_option("--points", sc.points, "Log-spaced samples")->capture_default_str();
  c->add_option("--interface-length", sc.interface_length, "L0")->capture_default_str();
  c->add_option("--out", sc.out, "CSV file (default stdout)");

  VerifyArgs ve;
  auto* v = app.add_subcommand("verify", "Run the acceptance suite");
  v->add_option("level", ve.level, "quick or full")->capture_default_str();
  v->add_option("--seed", ve.seed)->capture_default_str();
  v->add_option("--grid-nodes", ve.grid_nodes)->capture_default_str();
  v->add_option("--xmax", ve.xmax, "Grid extent in oscillator lengths")->capture_default_str();
  v->add_option("--dt", ve.dt, "Grid-engine time step (0: tau/2000)")->capture_default_str();
  v->add_option("--criteria", ve.criteria, "Subset of criterion ids");
  v->add_option("--threads", ve.threads, "Concurrent criteria (0: ABACUS_NUM_THREADS or all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*r) return cmd_run(run);
    if (*s) return cmd_spectrum(sp);
    if (*c) return cmd_scatter(sc);
    if (*v) return cmd_verify(ve);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return 3;
  } catch (const AccuracyError& e) {
    std::cerr << "accuracy failure: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
