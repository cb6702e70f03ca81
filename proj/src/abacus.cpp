#include "qabacus/abacus.hpp"

#include <algorithm>
#include <cmath>

#include "qabacus/errors.hpp"

namespace qabacus {

std::string to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::bump: return "bump";
    case ProfileKind::ground: return "ground";
    case ProfileKind::sampled: return "sampled";
  }
  return "unknown";
}

ProfileKind parse_profile_kind(const std::string& name) {
  if (name == "bump") return ProfileKind::bump;
  if (name == "ground") return ProfileKind::ground;
  throw ParseError("unknown profile '" + name + "' (expected bump or ground)");
}

std::vector<double> make_profile(const ProfileSpec& spec, const Grid& grid, const PhysicalConfig& cfg) {
  cfg.validate();
  const double l = cfg.length();
  std::function<double(double)> f;
  switch (spec.kind) {
    case ProfileKind::bump: {
      if (!(spec.width > 0.0)) throw ContractError("bump width must be positive");
      const double c = spec.center * l;
      const double w = spec.width * l;
      f = [c, w](double x) { return std::exp(-0.5 * (x - c) * (x - c) / (w * w)); };
      break;
    }
    case ProfileKind::ground:
      f = [l](double x) { return std::sqrt(2.0) * ho_wavefunction(0, x, l); };
      break;
    case ProfileKind::sampled:
      if (!spec.sampled) throw ContractError("sampled profile without a function");
      f = spec.sampled;
      break;
  }
  std::vector<double> v(grid.nodes);
  double norm = 0.0;
  for (std::size_t j = 0; j < grid.nodes; ++j) {
    v[j] = f(grid.x(j));
    norm += v[j] * v[j];
  }
  norm *= grid.spacing();
  if (!std::isfinite(norm) || norm <= 0.0) throw ContractError("profile is not normalisable on the grid");
  const double s = 1.0 / std::sqrt(norm);
  double check = 0.0;
  for (double& x : v) {
    x *= s;
    check += x * x;
  }
  check *= grid.spacing();
  if (std::abs(check - 1.0) > 1e-6) throw ContractError("profile norm cannot be brought to 1 within 1e-6");
  return v;
}

QubitState prepare(const std::vector<double>& profile, const Grid& grid, int bit) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
  return bit == 0 ? prepare_superposition(profile, grid, 1.0, 0.0) : prepare_superposition(profile, grid, 0.0, 1.0);
}

QubitState prepare(const ProfileSpec& spec, const Grid& grid, const PhysicalConfig& cfg, int bit) {
  return prepare(make_profile(spec, grid, cfg), grid, bit);
}

QubitState prepare_superposition(const std::vector<double>& profile, const Grid& grid, cplx alpha, cplx beta) {
  if (profile.size() != grid.nodes) throw std::invalid_argument("profile does not match the grid");
  const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (!(n > 0.0)) throw std::invalid_argument("zero qubit amplitudes");
  alpha /= n;
  beta /= n;
  QubitState q{GridState::zeros(grid), profile};
  for (std::size_t j = 0; j < grid.nodes; ++j) {
    q.state.plus[j] = alpha * profile[j];
    q.state.minus[j] = beta * profile[j];
  }
  return q;
}

namespace {

cplx overlap(const std::vector<double>& f, const std::vector<cplx>& psi, double h) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * psi[j];
  return s * h;
}

double side_fidelity(const std::vector<double>& f, const std::vector<cplx>& psi, double p, double h) {
  if (p < kEmptySide) return 1.0;
  return std::norm(overlap(f, psi, h)) / p;
}

}  // namespace

Readout readout(const QubitState& q) {
  const double h = q.state.grid.spacing();
  Readout r;
  r.p0 = q.state.plus_probability();
  r.p1 = q.state.minus_probability();
  r.fidelity0 = side_fidelity(q.profile, q.state.plus, r.p0, h);
  r.fidelity1 = side_fidelity(q.profile, q.state.minus, r.p1, h);
  return r;
}

std::array<cplx, 2> amplitudes(const QubitState& q) {
  const double h = q.state.grid.spacing();
  return {overlap(q.profile, q.state.plus, h), overlap(q.profile, q.state.minus, h)};
}

double qubit_space_residual(const QubitState& q) {
  const auto [a, b] = amplitudes(q);
  double s = 0.0;
  for (std::size_t j = 0; j < q.profile.size(); ++j) {
    s += std::norm(q.state.plus[j] - a * q.profile[j]) + std::norm(q.state.minus[j] - b * q.profile[j]);
  }
  return std::sqrt(s * q.state.grid.spacing());
}

Schedule compile_gate(const UnitaryGate& target, const PhysicalConfig& cfg) {
  cfg.validate();
  Schedule s;
  s.cfg = cfg;
  const GateClass c = classify(target);
  if (is_scale_invariant(c)) {
    s.steps.push_back(Step::gate(target, to_string(c)));
    s.phase_offset = -kI;
    return s;
  }
  if (c == GateClass::separating_diagonal) {
    const Mat2& m = target.matrix();
    s.steps.push_back(diagonal_step({std::arg(m[0]), std::arg(m[3])}, cfg));
    return s;
  }
  const GateDecomposition d = decompose_gate(target);
  int k = 0;
  for (const GateStep& g : d.steps) {
    s.steps.push_back(Step::gate(g.gate(), "decomposition " + std::to_string(++k)));
  }
  // Closed -I half period contributes i exp(-i V0 tau / hbar); choose it to
  // equal exp(i xi) i^(k-1) so the whole schedule applies the target.
  const double phase = d.xi + 0.5 * kPi * (k - 1);
  const double v0 = -std::remainder(phase, 2.0 * kPi) * cfg.hbar / cfg.half_period();
  s.steps.push_back(Step::closed({0.0, 0.0, v0}, 1.0, false, "phase"));
  return s;
}

QubitRun apply_schedule(const QubitState& q, const Schedule& schedule, const EngineOptions& options) {
  QubitRun out;
  out.run = run_schedule(schedule, q.state, options);
  out.qubit = {out.run.final_state, q.profile};
  return out;
}

std::string to_string(Move m) { return m == Move::open ? "open" : "closed"; }

ClassicalRun classical_run(const std::vector<Move>& moves, const QubitState& packet, const PhysicalConfig& cfg,
                           const EngineOptions& options) {
  const Readout start = readout(packet);
  if (start.confidence() < 0.999) {
    throw ContractError("classical run needs a packet localised on one side (>= 0.999)");
  }
  Schedule s;
  s.cfg = cfg;
  for (Move m : moves) {
    s.steps.push_back(m == Move::open ? Step::gate(UnitaryGate::sigma(1), "open")
                                      : Step::gate(UnitaryGate::minus_identity(), "closed"));
  }
  const RunResult run = run_schedule(s, packet.state, options);
  ClassicalRun out;
  out.final_state = {run.final_state, packet.profile};
  for (const Snapshot& snap : run.trace) {
    const Readout r = readout({snap.state, packet.profile});
    if (r.p0 > 0.01 && r.p0 < 0.99) out.decoherent = true;
    out.bits.push_back(r.bit());
    out.readouts.push_back(r);
  }
  out.final_readout = readout(out.final_state);
  return out;
}

CnotResult cnot_trigger(const QubitState& control, const QubitState& target, const PhysicalConfig& cfg,
                        const EngineOptions& options, double threshold) {
  const Readout rc = readout(control);
  if (rc.confidence() < threshold) {
    throw ContractError("trigger CNOT needs a classical control: max(p0, p1) = " + std::to_string(rc.confidence()) +
                        " is below the threshold " + std::to_string(threshold));
  }
  CnotResult out;
  out.applied = rc.p0 >= threshold;
  Schedule closed{cfg, {Step::gate(UnitaryGate::minus_identity(), "control closed")}};
  out.control = apply_schedule(control, closed, options).qubit;
  Schedule t{cfg, {out.applied ? Step::gate(UnitaryGate::sigma(1), "target open")
                               : Step::gate(UnitaryGate::minus_identity(), "target closed")}};
  out.target = apply_schedule(target, t, options).qubit;
  return out;
}

}  // namespace qabacus
