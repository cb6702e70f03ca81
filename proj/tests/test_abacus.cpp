#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qabacus/abacus.hpp"
#include "qabacus/errors.hpp"

using namespace qabacus;

namespace {

const PhysicalConfig kCfg;

EngineOptions engine(Engine e) {
  EngineOptions o;
  o.engine = e;
  return o;
}

}  // namespace

TEST_CASE("prepare and readout of basis states") {
  const Grid grid = Grid::standard(kCfg);
  for (ProfileKind k : {ProfileKind::bump, ProfileKind::ground}) {
    ProfileSpec spec;
    spec.kind = k;
    const Readout r0 = readout(prepare(spec, grid, kCfg, 0));
    const Readout r1 = readout(prepare(spec, grid, kCfg, 1));
    CHECK(r0.p0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r0.p1 == 0.0);
    CHECK(r1.p0 == 0.0);
    CHECK(r1.p1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r0.fidelity0 == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("bit 1 is the mirror of bit 0") {
  const Grid grid = Grid::standard(kCfg);
  const QubitState a = prepare(ProfileSpec{}, grid, kCfg, 0), b = prepare(ProfileSpec{}, grid, kCfg, 1);
  CHECK(l2_distance(a.state.transformed(UnitaryGate::sigma(1).matrix()), b.state) == 0.0);
}

TEST_CASE("bump profile fits the sigma_3 modal basis") {
  const Grid grid = Grid::standard(kCfg);
  const QubitState q = prepare(ProfileSpec{}, grid, kCfg, 0);
  CHECK(project(q.state, UnitaryGate::sigma(3), kDefaultModes, kCfg).truncation_loss < 1e-6);
}

TEST_CASE("make_profile rejects profiles that cannot be normalised") {
  const Grid grid = Grid::standard(kCfg);
  ProfileSpec zero;
  zero.kind = ProfileKind::sampled;
  zero.sampled = [](double) { return 0.0; };
  CHECK_THROWS_AS(make_profile(zero, grid, kCfg), ContractError);
  ProfileSpec nan = zero;
  nan.sampled = [](double) { return std::nan(""); };
  CHECK_THROWS_AS(make_profile(nan, grid, kCfg), ContractError);
  CHECK_THROWS_AS(parse_profile_kind("square"), ParseError);
}

TEST_CASE("readout after NOT and Hadamard (modal)") {
  const Grid grid = Grid::standard(kCfg);
  const QubitState q = prepare(ProfileSpec{}, grid, kCfg, 0);
  const Readout n = readout(apply_schedule(q, {kCfg, {Step::gate(UnitaryGate::sigma(1))}}, engine(Engine::modal)).qubit);
  CHECK(n.p1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(n.fidelity1 >= 1.0 - 1e-8);
  const Readout h = readout(apply_schedule(q, {kCfg, {Step::gate(UnitaryGate::hadamard())}}, engine(Engine::modal)).qubit);
  CHECK(std::abs(h.p0 - 0.5) < 1e-8);
  CHECK(h.p0 + h.p1 == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("qubit-space closure under Bloch half periods") {
  std::mt19937_64 rng(53);
  std::normal_distribution<double> g;
  const Grid grid = Grid::standard(kCfg);
  const std::vector<double> f = make_profile({}, grid, kCfg);
  for (int i = 0; i < 20; ++i) {
    const UnitaryGate u = bloch_matrix(sample_bloch(rng));
    const QubitState q = prepare_superposition(f, grid, {g(rng), g(rng)}, {g(rng), g(rng)});
    const auto in = amplitudes(q);
    const QubitState out = apply_schedule(q, {kCfg, {Step::gate(u)}}, engine(Engine::modal)).qubit;
    CHECK(qubit_space_residual(out) < 1e-6);
    const Vec2 expect = mat2::apply(half_period_map(u), {in[0], in[1]});
    const auto got = amplitudes(out);
    CHECK(std::abs(got[0] - expect[0]) < 1e-8);
    CHECK(std::abs(got[1] - expect[1]) < 1e-8);
  }
}

TEST_CASE("compile_gate shapes") {
  const Schedule n = compile_gate(UnitaryGate::sigma(1), kCfg);
  CHECK(n.steps.size() == 1);
  CHECK(n.phase_offset == -kI);
  CHECK(compile_gate(UnitaryGate::hadamard(), kCfg).steps.size() == 1);
  const Schedule d = compile_gate(UnitaryGate(DiagonalGate{kPi / 5, -kPi / 5}.matrix()), kCfg);
  REQUIRE(d.steps.size() == 1);
  CHECK_FALSE(d.steps[0].is_gate());
  std::mt19937_64 rng(59);
  const Schedule g = compile_gate(sample_unitary(rng), kCfg);
  CHECK(g.steps.size() <= 5);
  CHECK_FALSE(g.steps.back().is_gate());
}

TEST_CASE("compiled diagonal gate matches its matrix (modal)") {
  const Grid grid = Grid::standard(kCfg);
  const std::vector<double> f = make_profile({}, grid, kCfg);
  const UnitaryGate target(DiagonalGate{kPi / 5, -kPi / 5}.matrix());
  const QubitState q = prepare_superposition(f, grid, 0.6, 0.8 * kI);
  const Schedule s = compile_gate(target, kCfg);
  const auto out = amplitudes(apply_schedule(q, s, engine(Engine::modal)).qubit);
  const Vec2 want = mat2::apply(mat2::scale(s.phase_offset, target.matrix()), {0.6, 0.8 * kI});
  CHECK(std::abs(out[0] - want[0]) < 1e-9);
  CHECK(std::abs(out[1] - want[1]) < 1e-9);
}

TEST_CASE("compiled random targets act as the target up to the recorded phase") {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> g;
  const Grid grid = Grid::standard(kCfg);
  const std::vector<double> f = make_profile({}, grid, kCfg);
  for (int i = 0; i < 50; ++i) {
    const UnitaryGate u = sample_unitary(rng);
    const cplx a{g(rng), g(rng)}, b{g(rng), g(rng)};
    const QubitState q = prepare_superposition(f, grid, a, b);
    const auto in = amplitudes(q);
    const Schedule s = compile_gate(u, kCfg);
    const auto out = amplitudes(apply_schedule(q, s, engine(Engine::modal)).qubit);
    const Vec2 want = mat2::apply(mat2::scale(s.phase_offset, u.matrix()), {in[0], in[1]});
    CHECK(std::abs(out[0] - want[0]) < 1e-8);
    CHECK(std::abs(out[1] - want[1]) < 1e-8);
  }
}

TEST_CASE("classical bead runs") {
  const Grid grid = Grid::standard(kCfg);
  const QubitState q = prepare(ProfileSpec{}, grid, kCfg, 0);
  for (Engine e : {Engine::modal, Engine::grid}) {
    const ClassicalRun closed = classical_run({Move::closed}, q, kCfg, engine(e));
    CHECK(closed.bits == std::vector<int>{0});
    CHECK(closed.final_readout.p0 >= 0.999);
    const ClassicalRun open = classical_run({Move::open}, q, kCfg, engine(e));
    CHECK(open.bits == std::vector<int>{1});
    CHECK(open.final_readout.p1 >= 0.999);
    const ClassicalRun two = classical_run({Move::open, Move::open}, q, kCfg, engine(e));
    CHECK(two.bits == std::vector<int>{1, 0});
    CHECK(two.final_readout.fidelity0 >= 0.999);
    CHECK_FALSE(two.decoherent);
  }
  const QubitState mixed = prepare_superposition(make_profile({}, grid, kCfg), grid, 1.0, 1.0);
  CHECK_THROWS_AS(classical_run({Move::open}, mixed, kCfg, engine(Engine::modal)), ContractError);
}

TEST_CASE("trigger CNOT truth table and superposed control") {
  const Grid grid = Grid::standard(kCfg);
  const std::vector<double> f = make_profile({}, grid, kCfg);
  for (Engine e : {Engine::modal, Engine::grid}) {
    for (int c = 0; c < 2; ++c) {
      for (int t = 0; t < 2; ++t) {
        const CnotResult r = cnot_trigger(prepare(f, grid, c), prepare(f, grid, t), kCfg, engine(e));
        CHECK(r.applied == (c == 0));
        CHECK(readout(r.control).bit() == c);
        CHECK(readout(r.target).bit() == (c == 0 ? 1 - t : t));
        CHECK(readout(r.target).confidence() >= 0.999);
        CHECK(readout(r.control).confidence() >= 0.999);
      }
    }
  }
  CHECK_THROWS_AS(cnot_trigger(prepare_superposition(f, grid, 1.0, 1.0), prepare(f, grid, 0), kCfg,
                               engine(Engine::modal)),
                  ContractError);
}
