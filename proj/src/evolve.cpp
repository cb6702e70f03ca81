#include "qabacus/evolve.hpp"

#include <cmath>
#include <memory>
#include <utility>

#include "qabacus/errors.hpp"
#include "qabacus/kernels.hpp"

namespace qabacus {

Step Step::gate(const UnitaryGate& u, std::string label) { return {GateHalfPeriod{u}, std::move(label)}; }

Step Step::closed(const SidePotentials& pot, double half_periods, bool neumann, std::string label) {
  if (!(half_periods > 0.0)) throw std::invalid_argument("closed step needs a positive duration");
  return {ClosedWithPotentials{pot, half_periods, neumann}, std::move(label)};
}

UnitaryGate Step::interaction() const {
  if (const auto* g = std::get_if<GateHalfPeriod>(&action)) return g->gate;
  return std::get<ClosedWithPotentials>(action).neumann ? UnitaryGate::identity() : UnitaryGate::minus_identity();
}

SidePotentials Step::potentials() const {
  if (const auto* c = std::get_if<ClosedWithPotentials>(&action)) return c->potentials;
  return {};
}

double Step::duration_half_periods() const {
  if (const auto* c = std::get_if<ClosedWithPotentials>(&action)) return c->duration_half_periods;
  return 1.0;
}

double Schedule::total_half_periods() const {
  double t = 0.0;
  for (const Step& s : steps) t += s.duration_half_periods();
  return t;
}

Mat2 half_period_map(const UnitaryGate& u) {
  const GateClass c = classify(u);
  if (!is_scale_invariant(c)) {
    throw ContractError("half-period identity holds only for scale-invariant gates, got " + to_string(c));
  }
  return mat2::scale(-kI, u.matrix());
}

namespace {

bool is_whole(double x) { return std::abs(x - std::round(x)) <= 1e-12; }

// Scalar factor of a closed step of `k` whole half periods, before side
// potentials: Dirichlet modes (odd n) pick up i per half period, Neumann -i.
cplx closed_scalar(const ClosedWithPotentials& c, const PhysicalConfig& cfg) {
  const long k = std::lround(c.duration_half_periods);
  const cplx per = c.neumann ? -kI : kI;
  const double t = c.duration_half_periods * cfg.half_period();
  return std::pow(per, static_cast<int>(k)) * std::exp(-kI * c.potentials.zero * t / cfg.hbar);
}

}  // namespace

std::optional<Mat2> ideal_step_matrix(const Step& step, const PhysicalConfig& cfg) {
  if (const auto* g = std::get_if<GateHalfPeriod>(&step.action)) {
    if (!is_scale_invariant(classify(g->gate))) return std::nullopt;
    return half_period_map(g->gate);
  }
  const auto& c = std::get<ClosedWithPotentials>(step.action);
  if (!is_whole(c.duration_half_periods)) return std::nullopt;
  const double t = c.duration_half_periods * cfg.half_period();
  const cplx s = closed_scalar(c, cfg);
  return Mat2{s * std::exp(-kI * c.potentials.plus * t / cfg.hbar), 0.0, 0.0,
              s * std::exp(-kI * c.potentials.minus * t / cfg.hbar)};
}

ModalState evolve_modal(const ModalState& s, double t, const PhysicalConfig& cfg, const SidePotentials& pot) {
  const ModalBasis basis(s.basis_gate);
  const bool decoupled = basis.gate_class() != GateClass::scale_invariant_bloch;
  if (!decoupled && pot.plus != pot.minus) {
    throw ContractError("side potentials need a closed (+-I) gate; the Bloch basis mixes the two sides");
  }
  ModalState out = s;
  for (std::size_t n = 0; n < out.coeffs.size(); ++n) {
    const int mode = static_cast<int>(n);
    const double side_v = basis.side(mode) == 0 ? pot.plus : pot.minus;
    const double energy = basis.energy(mode) * cfg.energy_unit() + side_v + pot.zero;
    out.coeffs[n] *= std::exp(-kI * std::remainder(energy * t / cfg.hbar, 2.0 * kPi));
  }
  return out;
}

GridState evolve_modal(const UnitaryGate& u, const GridState& s, double t, const PhysicalConfig& cfg, int modes,
                       const SidePotentials& pot) {
  const ModalBasis basis(u);
  const HermiteTable table(s.grid, cfg.length(), basis.max_hermite(modes) + 1);
  const Projection p = project(s, basis, table, modes);
  return synthesize(evolve_modal(p.state, t, cfg, pot), basis, table);
}

namespace {

GridState cn_run(const PointInteraction& pi, const GridState& s, const SidePotentials& pot, std::size_t steps,
                 double dt, const PhysicalConfig& cfg) {
  PhysicalConfig c = cfg;
  c.interface_length = pi.interface_length;
  const kernels::Tridiagonal h = unfolded_hamiltonian(pi.gate, c, s.grid, pot);
  const double alpha = 0.5 * dt / cfg.hbar;
  const kernels::CrankNicolsonSolver solver(h, alpha);
  std::vector<cplx> psi = unfold(s);
  std::vector<cplx> rhs(psi.size());
  for (std::size_t n = 0; n < steps; ++n) {
    kernels::parallel::cn_rhs(h, alpha, psi, rhs);
    solver.solve(rhs, psi);
  }
  return fold(psi, s.grid);
}

}  // namespace

CnResult evolve_grid_cn(const PointInteraction& pi, const GridState& s, const SidePotentials& pot, double dt,
                        double total_time, const PhysicalConfig& cfg, bool check_step_halving) {
  cfg.validate();
  if (!(dt > 0.0) || total_time < 0.0) throw std::invalid_argument("need dt > 0 and T >= 0");
  CnResult out;
  if (total_time == 0.0) {
    out.state = s;
    return out;
  }
  out.steps = static_cast<std::size_t>(std::max(1.0, std::ceil(total_time / dt - 1e-9)));
  const double step = total_time / static_cast<double>(out.steps);
  out.state = cn_run(pi, s, pot, out.steps, step, cfg);
  out.norm_drift = std::abs(std::sqrt(out.state.norm_squared()) - std::sqrt(s.norm_squared()));
  if (check_step_halving) {
    const GridState fine = cn_run(pi, s, pot, 2 * out.steps, 0.5 * step, cfg);
    out.halving_discrepancy = l2_distance(out.state, fine);
    if (out.halving_discrepancy > 1e-3) {
      throw AccuracyError("grid engine not converged in time: halving dt moves the state by " +
                              std::to_string(out.halving_discrepancy),
                          out.halving_discrepancy);
    }
  }
  return out;
}

Step diagonal_step(const DiagonalGate& d, const PhysicalConfig& cfg) {
  const double unit = cfg.hbar / cfg.half_period();
  const auto potential = [unit](double theta) { return std::remainder(0.5 * kPi - theta, 2.0 * kPi) * unit; };
  return Step::closed({potential(d.theta_plus), potential(d.theta_minus), 0.0}, 1.0, false, "diagonal");
}

std::string to_string(Engine e) { return e == Engine::modal ? "modal" : "grid"; }

RunResult run_schedule(const Schedule& schedule, const GridState& initial, const EngineOptions& options) {
  const PhysicalConfig& cfg = schedule.cfg;
  cfg.validate();
  RunResult out;
  out.final_state = initial;

  std::unique_ptr<HermiteTable> table;
  if (options.engine == Engine::modal) {
    for (const Step& step : schedule.steps) ModalBasis{step.interaction()};  // reject before running
    table = std::make_unique<HermiteTable>(initial.grid, cfg.length(), options.modes + 2);
  }

  for (const Step& step : schedule.steps) {
    const double t = step.duration_half_periods() * cfg.half_period();
    const SidePotentials pot = step.potentials();
    Snapshot snap;
    snap.label = step.label;
    if (options.engine == Engine::modal) {
      const ModalBasis basis(step.interaction());
      const Projection p = project(out.final_state, basis, *table, options.modes);
      snap.truncation_loss = p.truncation_loss;
      snap.state = synthesize(evolve_modal(p.state, t, cfg, pot), basis, *table);
    } else {
      const PointInteraction pi{step.interaction(), cfg.interface_length};
      CnResult r = evolve_grid_cn(pi, out.final_state, pot, options.time_step(cfg), t, cfg,
                                  options.check_step_halving);
      snap.halving_discrepancy = r.halving_discrepancy;
      snap.state = std::move(r.state);
    }
    if (const std::optional<Mat2> ideal = ideal_step_matrix(step, cfg)) {
      snap.ideal_fidelity = fidelity(out.final_state.transformed(*ideal), snap.state);
      if (const auto* c = std::get_if<ClosedWithPotentials>(&step.action)) {
        snap.nominal_phase = closed_scalar(*c, cfg);
      } else {
        snap.nominal_phase = -kI;
      }
      out.global_phase *= snap.nominal_phase;
    }
    snap.p_plus = snap.state.plus_probability();
    snap.p_minus = snap.state.minus_probability();
    snap.norm = snap.p_plus + snap.p_minus;
    out.final_state = snap.state;
    out.trace.push_back(std::move(snap));
  }
  return out;
}

}  // namespace qabacus
