#pragma once

// Time evolution. Two independent engines:
//  - modal: exact phases e^{-i eps_n t / hbar} in the eigenbasis of a
//    scale-invariant gate (only such gates are accepted);
//  - grid: Crank-Nicolson on the unfolded finite-difference chain, with the
//    connection condition imposed through ghost nodes. It never uses the
//    half-period identity and accepts any unitary gate.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qabacus/discretization.hpp"
#include "qabacus/oscillator.hpp"
#include "qabacus/pointint.hpp"
#include "qabacus/su2.hpp"

namespace qabacus {

/// Point interaction switched on for exactly one half period.
struct GateHalfPeriod {
  UnitaryGate gate;
};

/// Closed gate (-I, or +I when requested) with constant potentials.
struct ClosedWithPotentials {
  SidePotentials potentials;
  double duration_half_periods = 1.0;
  bool neumann = false;  // gate +I instead of -I
};

struct Step {
  std::variant<GateHalfPeriod, ClosedWithPotentials> action;
  std::string label;

  static Step gate(const UnitaryGate& u, std::string label = {});
  static Step closed(const SidePotentials& pot, double half_periods = 1.0, bool neumann = false,
                     std::string label = {});

  bool is_gate() const { return std::holds_alternative<GateHalfPeriod>(action); }
  UnitaryGate interaction() const;
  SidePotentials potentials() const;
  double duration_half_periods() const;
};

struct Schedule {
  PhysicalConfig cfg;
  std::vector<Step> steps;
  /// Executing the schedule applies phase_offset * (intended 2x2 operation).
  cplx phase_offset = 1.0;

  double total_half_periods() const;
};

/// -iU for scale-invariant U. Throws ContractError otherwise.
Mat2 half_period_map(const UnitaryGate& u);

/// 2x2 action of a step on the qubit space when it is exact: -iU for
/// scale-invariant gate steps, and the per-side phases of a closed step whose
/// duration is a whole number of half periods.
std::optional<Mat2> ideal_step_matrix(const Step& step, const PhysicalConfig& cfg);

/// a_n -> exp(-i (eps_n + V_side + V_0) t / hbar) a_n in the state's own basis.
/// Side potentials are only meaningful when the basis gate is +-I (or
/// V_plus == V_minus); otherwise ContractError.
ModalState evolve_modal(const ModalState& s, double t, const PhysicalConfig& cfg, const SidePotentials& pot = {});

/// Projects onto Phi^U, evolves and synthesises back.
GridState evolve_modal(const UnitaryGate& u, const GridState& s, double t, const PhysicalConfig& cfg,
                       int modes = kDefaultModes, const SidePotentials& pot = {});

struct CnResult {
  GridState state;
  std::size_t steps = 0;
  double norm_drift = 0.0;
  /// L2 change of the final state when dt is halved; NaN when not checked.
  double halving_discrepancy = std::numeric_limits<double>::quiet_NaN();
};

/// Crank-Nicolson over total time T with step close to dt (T is split into a
/// whole number of steps). With `check_step_halving`, reruns at dt/2 and
/// throws AccuracyError when the final states differ by more than 1e-3 in L2.
CnResult evolve_grid_cn(const PointInteraction& pi, const GridState& s, const SidePotentials& pot, double dt,
                        double total_time, const PhysicalConfig& cfg, bool check_step_halving = false);

/// Closed -I step of one half period with V_pm = (pi/2 - theta_pm) hbar / tau
/// reduced to the smallest magnitude, realising diag(e^{i theta+}, e^{i theta-}).
Step diagonal_step(const DiagonalGate& d, const PhysicalConfig& cfg);

enum class Engine { modal, grid };

std::string to_string(Engine e);

struct EngineOptions {
  Engine engine = Engine::modal;
  int modes = kDefaultModes;
  /// Grid engine time step; 0 selects tau / 2000.
  double dt = 0.0;
  bool check_step_halving = false;

  double time_step(const PhysicalConfig& cfg) const { return dt > 0.0 ? dt : cfg.half_period() / 2000.0; }
};

struct Snapshot {
  std::string label;
  GridState state;
  double norm = 0.0;
  double p_plus = 0.0;
  double p_minus = 0.0;
  /// Scalar factor the step contributes by its ideal action (e.g. -i for a
  /// Bloch half period); 0 when the step has no exact 2x2 action.
  cplx nominal_phase = 0.0;
  /// |<ideal, actual>|^2 against the exact 2x2 action applied to the previous
  /// snapshot; NaN when no exact action exists.
  double ideal_fidelity = std::numeric_limits<double>::quiet_NaN();
  double truncation_loss = std::numeric_limits<double>::quiet_NaN();      // modal
  double halving_discrepancy = std::numeric_limits<double>::quiet_NaN();  // grid
};

struct RunResult {
  GridState final_state;
  std::vector<Snapshot> trace;  // one per step
  /// Product of nominal phases, kept out of every state comparison.
  cplx global_phase = 1.0;
};

/// Applies the steps in order. The modal engine rejects steps whose gate is
/// not scale-invariant (ContractError).
RunResult run_schedule(const Schedule& schedule, const GridState& initial, const EngineOptions& options);

}  // namespace qabacus
