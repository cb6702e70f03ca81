#include <doctest.h>

#include <sstream>

#include "qabacus/errors.hpp"
#include "qabacus/io.hpp"

using namespace qabacus;
using io::json;

TEST_CASE("named gates") {
  CHECK(classify(io::parse_gate("I")) == GateClass::plus_identity);
  CHECK(classify(io::parse_gate("-I")) == GateClass::minus_identity);
  CHECK(mat2::max_abs_diff(io::parse_gate("NOT").matrix(), UnitaryGate::sigma(1).matrix()) == 0.0);
  CHECK(mat2::max_abs_diff(io::parse_gate("hadamard").matrix(), UnitaryGate::hadamard().matrix()) == 0.0);
  CHECK(mat2::max_abs_diff(io::parse_gate("BLOCH(0.7, 2.1)").matrix(), bloch_matrix(0.7, 2.1).matrix()) == 0.0);
  CHECK_THROWS_AS(io::parse_gate("BLOCH(0.7)"), ParseError);
  CHECK_THROWS_AS(io::parse_gate("BLOCH(a,1)"), ParseError);
  CHECK_THROWS_AS(io::parse_gate("CNOT"), ParseError);
}

TEST_CASE("matrix gates: flat, nested, round trip, non-unitary") {
  const json flat = json::parse("[[0,0],[1,0],[1,0],[0,0]]");
  const json nested = json::parse("[[[0,0],[1,0]],[[1,0],[0,0]]]");
  CHECK(mat2::max_abs_diff(io::parse_gate(flat).matrix(), UnitaryGate::sigma(1).matrix()) == 0.0);
  CHECK(mat2::max_abs_diff(io::parse_gate(nested).matrix(), UnitaryGate::sigma(1).matrix()) == 0.0);
  const UnitaryGate h = UnitaryGate::hadamard();
  CHECK(mat2::max_abs_diff(io::parse_gate(io::gate_to_json(h)).matrix(), h.matrix()) == 0.0);
  CHECK_THROWS_AS(io::parse_gate(json::parse("[[1,0],[1,0],[0,0],[1,0]]")), ParseError);
  CHECK_THROWS_AS(io::parse_gate(json::parse("[1,2,3]")), ParseError);
}

TEST_CASE("schedule parsing") {
  const json j = json::parse(R"({
    "config": {"mass": 1, "omega": 2, "hbar": 1},
    "steps": [
      {"kind": "gate_half_period", "gate": "NOT", "label": "open"},
      {"kind": "closed_with_potentials", "V_plus": 0.5, "V_minus": -0.5, "duration_half_periods": 2},
      {"kind": "closed_with_potentials", "gate": "I", "V_zero": 1.0},
      {"kind": "compiled", "gate": "HADAMARD"}
    ]})");
  const Schedule s = io::parse_schedule(j);
  CHECK(s.cfg.omega == 2.0);
  REQUIRE(s.steps.size() == 4);
  CHECK(s.steps[0].label == "open");
  CHECK(s.steps[1].potentials().plus == 0.5);
  CHECK(s.steps[1].duration_half_periods() == 2.0);
  CHECK(classify(s.steps[2].interaction()) == GateClass::plus_identity);
  CHECK(s.phase_offset == -kI);
  CHECK(s.total_half_periods() == 5.0);

  const Schedule back = io::parse_schedule(io::schedule_to_json(s));
  CHECK(io::schedule_to_json(back) == io::schedule_to_json(s));
}

TEST_CASE("schedule errors") {
  CHECK_THROWS_AS(io::parse_schedule(json::parse("[]")), ParseError);
  CHECK_THROWS_AS(io::parse_schedule(json::parse(R"({"steps": [{"kind": "teleport"}]})")), ParseError);
  CHECK_THROWS_AS(io::parse_schedule(json::parse(R"({"steps": [{"kind": "gate_half_period"}]})")), ParseError);
  CHECK_THROWS_AS(io::parse_schedule(json::parse(
                      R"({"steps": [{"kind": "closed_with_potentials", "gate": "NOT"}]})")),
                  ParseError);
  CHECK_THROWS_AS(io::parse_schedule(json::parse(R"({"config": {"mass": -1}, "steps": []})")), ParseError);
  CHECK_THROWS_AS(io::read_json_file("/nonexistent/schedule.json"), ParseError);
}

TEST_CASE("CSV tables") {
  SpectrumResult r;
  r.levels = {0.5, 1.5};
  r.residuals = {0.0, 1e-15};
  std::ostringstream os;
  io::write_spectrum_csv(os, r);
  CHECK(os.str() == "index,E_over_hbar_omega,residual\n0,0.5,0\n1,1.5,1.0000000000000001e-15\n");
  CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("qubit program") {
  io::ProgramOptions opt;
  opt.grid = Grid::standard(opt.cfg);
  const json program = json::parse(R"([
    {"op": "prepare", "args": {"register": "a", "bit": 0}},
    {"op": "prepare", "args": {"register": "b", "bit": 0}},
    {"op": "cnot", "args": {"control": "a", "target": "b"}},
    {"op": "gate", "register": "a", "gate": "HADAMARD"},
    {"op": "readout", "args": {"register": "a"}},
    {"op": "readout", "args": {"register": "b"}}
  ])");
  const io::ProgramResult r = io::run_program(program, opt);
  const json& ro = r.results["readouts"];
  REQUIRE(ro.size() == 2);
  CHECK(ro[0]["p0"].get<double>() == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(ro[1]["p1"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.results["cnot"][0]["applied"].get<bool>());
  CHECK(r.results["phase_log"].size() == 3);

  CHECK_THROWS_AS(io::run_program(json::parse(R"([{"op": "readout", "args": {"register": "z"}}])"), opt),
                  ParseError);
  CHECK_THROWS_AS(io::run_program(json::parse(R"([{"op": "dance"}])"), opt), ParseError);
}
