#include <doctest.h>

#include <cmath>
#include <random>

#include "qabacus/errors.hpp"
#include "qabacus/evolve.hpp"

using namespace qabacus;

namespace {

const PhysicalConfig kCfg;

GridState packet(const Grid& grid, cplx a, cplx b, double center = 3.2, double k = 0.7) {
  GridState s = GridState::sample(grid, [&](double x) {
    const cplx f = std::exp(-0.5 * (x - center) * (x - center) / 0.25) * std::exp(kI * k * x);
    return Vec2{a * f, b * f};
  });
  s.normalize();
  return s;
}

}  // namespace

TEST_CASE("half_period_map") {
  const Mat2 m = half_period_map(UnitaryGate::sigma(3));
  CHECK(m[0] == -kI);
  CHECK(m[3] == kI);
  CHECK_THROWS_AS(half_period_map(UnitaryGate(DiagonalGate{0.2, 0.9}.matrix())), ContractError);
  const Mat2 twice = mat2::multiply(half_period_map(UnitaryGate::hadamard()), half_period_map(UnitaryGate::hadamard()));
  CHECK(mat2::max_abs_diff(twice, mat2::scale(-1.0, mat2::identity())) < 1e-15);
}

TEST_CASE("modal evolution: t = 0 identity, t = 2 tau global -1") {
  const Grid grid = Grid::standard(kCfg);
  const GridState s = packet(grid, 0.6, 0.8 * kI);
  const Projection p = project(s, UnitaryGate::hadamard(), kDefaultModes, kCfg);
  const ModalState zero = evolve_modal(p.state, 0.0, kCfg);
  CHECK(zero.coeffs == p.state.coeffs);
  const ModalState full = evolve_modal(p.state, 2.0 * kCfg.half_period(), kCfg);
  double worst = 0.0;
  for (std::size_t n = 0; n < full.coeffs.size(); ++n) worst = std::max(worst, std::abs(full.coeffs[n] + p.state.coeffs[n]));
  CHECK(worst < 1e-13);
}

TEST_CASE("modal NOT moves (f, 0) to -i (0, f)") {
  const Grid grid = Grid::standard(kCfg);
  // Centred far enough out that f(0) ~ 1e-13 and the odd extension is smooth.
  const GridState s = packet(grid, 1.0, 0.0, 3.8, 0.0);
  const GridState out = evolve_modal(UnitaryGate::sigma(1), s, kCfg.half_period(), kCfg);
  CHECK(l2_distance(out, s.transformed(half_period_map(UnitaryGate::sigma(1)))) < 1e-9);
}

TEST_CASE("modal engine rejects side potentials on a Bloch basis") {
  const Grid grid = Grid::standard(kCfg);
  const Projection p = project(packet(grid, 1.0, 0.0), UnitaryGate::sigma(1), 32, kCfg);
  CHECK_THROWS_AS(evolve_modal(p.state, 1.0, kCfg, {0.3, -0.3, 0.0}), ContractError);
  CHECK_NOTHROW(evolve_modal(p.state, 1.0, kCfg, {0.3, 0.3, 0.0}));
}

TEST_CASE("grid engine: norm preserved over 10^4 steps") {
  const Grid grid = Grid::make(12.0, 1024);
  const GridState s = packet(grid, 0.6, 0.8);
  const double dt = kCfg.half_period() / 2000.0;
  const CnResult r = evolve_grid_cn({bloch_matrix(0.9, 1.7)}, s, {}, dt, 10000 * dt, kCfg);
  CHECK(r.steps == 10000);
  CHECK(std::abs(std::sqrt(r.state.norm_squared()) - 1.0) < 1e-8);
}

TEST_CASE("grid engine accepts generic gates and conserves norm") {
  std::mt19937_64 rng(41);
  const Grid grid = Grid::make(12.0, 512);
  const GridState s = packet(grid, 0.6, 0.8, 1.5, -2.0);
  const CnResult r = evolve_grid_cn({sample_unitary(rng), 0.8}, s, {}, 1e-3, 1.0, kCfg);
  CHECK(std::abs(r.state.norm_squared() - 1.0) < 1e-10);
}

TEST_CASE("grid engine: closed gate keeps side norms") {
  const Grid grid = Grid::make(12.0, 1024);
  const GridState s = packet(grid, 0.6, 0.8, 1.0, -3.0);
  const CnResult r = evolve_grid_cn({UnitaryGate::minus_identity()}, s, {0.2, -0.1, 0.05}, 1e-3, 2.0, kCfg);
  CHECK(std::abs(r.state.plus_probability() - s.plus_probability()) < 1e-8);
  CHECK(std::abs(r.state.minus_probability() - s.minus_probability()) < 1e-8);
}

TEST_CASE("grid engine reproduces -iU for free and Hadamard gates") {
  const Grid grid = Grid::standard(kCfg);
  const GridState s = packet(grid, 1.0, 0.0, 3.0, 0.0);
  const double dt = kCfg.half_period() / 2000.0;
  for (const UnitaryGate& u : {UnitaryGate::sigma(1), UnitaryGate::hadamard()}) {
    const CnResult r = evolve_grid_cn({u}, s, {}, dt, kCfg.half_period(), kCfg, true);
    CHECK(fidelity(r.state, s.transformed(half_period_map(u))) >= 0.999);
    CHECK(r.halving_discrepancy < 1e-3);
  }
  const CnResult h = evolve_grid_cn({UnitaryGate::hadamard()}, s, {}, dt, kCfg.half_period(), kCfg);
  CHECK(std::abs(h.state.plus_probability() - 0.5) < 2e-3);
}

TEST_CASE("grid engine flags unresolved time steps") {
  const Grid grid = Grid::make(12.0, 512);
  const GridState s = packet(grid, 1.0, 0.0, 3.0, 4.0);
  CHECK_THROWS_AS(evolve_grid_cn({UnitaryGate::sigma(1)}, s, {}, kCfg.half_period() / 4, kCfg.half_period(), kCfg, true),
                  AccuracyError);
}

TEST_CASE("diagonal_step potentials") {
  const Step bare = diagonal_step({0.5 * kPi, 0.5 * kPi}, kCfg);
  CHECK(bare.potentials().plus == doctest::Approx(0.0));
  CHECK(bare.potentials().minus == doctest::Approx(0.0));
  const Step z = diagonal_step({0.0, kPi}, kCfg);
  const double unit = kCfg.hbar / kCfg.half_period();
  CHECK(z.potentials().plus == doctest::Approx(0.5 * kPi * unit));
  CHECK(z.potentials().minus == doctest::Approx(-0.5 * kPi * unit));
  for (double t : {0.1, 2.0, 4.0, 6.2}) {
    const Step s = diagonal_step({t, 0.0}, kCfg);
    CHECK(std::abs(s.potentials().plus) <= kPi * unit + 1e-12);
  }
}

TEST_CASE("diagonal_step realises diag(e^{i theta+}, e^{i theta-}) in both engines") {
  const DiagonalGate d{kPi / 5, -kPi / 5};
  const Grid grid = Grid::standard(kCfg);
  const GridState s = packet(grid, 0.6, 0.8, 3.0, 0.0);
  const Schedule sch{kCfg, {diagonal_step(d, kCfg)}};
  const GridState want = s.transformed(d.matrix());
  for (Engine e : {Engine::modal, Engine::grid}) {
    EngineOptions o;
    o.engine = e;
    const RunResult r = run_schedule(sch, s, o);
    if (e == Engine::modal) {
      CHECK(std::abs(inner(want, r.final_state) - 1.0) < 1e-9);
    } else {
      CHECK(fidelity(want, r.final_state) >= 0.999);
      CHECK(std::abs(inner(want, r.final_state) - 1.0) < 2e-2);
    }
  }
}

TEST_CASE("run_schedule: empty, double NOT, trace and phase bookkeeping") {
  const Grid grid = Grid::standard(kCfg);
  const GridState s = packet(grid, 1.0, 0.0, 3.8, 0.0);
  EngineOptions o;
  const RunResult empty = run_schedule({kCfg, {}}, s, o);
  CHECK(empty.trace.empty());
  CHECK(l2_distance(empty.final_state, s) == 0.0);

  const Schedule twice{kCfg, {Step::gate(UnitaryGate::sigma(1), "a"), Step::gate(UnitaryGate::sigma(1), "b")}};
  const RunResult r = run_schedule(twice, s, o);
  REQUIRE(r.trace.size() == 2);
  CHECK(r.trace[0].p_minus == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.trace[1].p_plus == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(r.global_phase + 1.0) < 1e-15);
  CHECK(l2_distance(r.final_state, s.scaled(-1.0)) < 1e-9);
  CHECK(r.trace[1].ideal_fidelity == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("modal run_schedule rejects generic gates before running") {
  const Grid grid = Grid::standard(kCfg);
  std::mt19937_64 rng(43);
  const Schedule s{kCfg, {Step::gate(UnitaryGate::sigma(1)), Step::gate(sample_unitary(rng))}};
  CHECK_THROWS_AS(run_schedule(s, packet(grid, 1.0, 0.0), {}), ContractError);
}

TEST_CASE("conjugation covariance of the modal engine") {
  std::mt19937_64 rng(47);
  const Grid grid = Grid::standard(kCfg);
  for (int i = 0; i < 5; ++i) {
    const UnitaryGate u = bloch_matrix(sample_bloch(rng));
    const UnitaryGate v = sample_unitary(rng);
    const GridState s = packet(grid, 0.3, 0.7 * kI, 3.0 + 0.2 * i, 0.5);
    const double t = 0.37 * (i + 1);
    const GridState lhs = evolve_modal(conjugate(u, v), s.transformed(v.matrix()), t, kCfg);
    const GridState rhs = evolve_modal(u, s, t, kCfg).transformed(v.matrix());
    CHECK(l2_distance(lhs, rhs) < 1e-9);
  }
}
