#pragma once

// The qubit layer: |0> = (f, 0), |1> = (0, f) with a shared half-line
// profile f, readout by side occupation, gate compilation to schedules,
// classical bead moves and the trigger CNOT.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "qabacus/evolve.hpp"
#include "qabacus/oscillator.hpp"
#include "qabacus/su2.hpp"

namespace qabacus {

enum class ProfileKind { bump, ground, sampled };

std::string to_string(ProfileKind k);
/// "bump" or "ground"; ParseError otherwise.
ProfileKind parse_profile_kind(const std::string& name);

struct ProfileSpec {
  ProfileKind kind = ProfileKind::bump;
  /// Gaussian exp(-(x - center)^2 / (2 width^2)), in oscillator lengths.
  double center = 3.0;
  double width = 0.5;
  /// Used when kind == sampled; x in physical units.
  std::function<double(double)> sampled;
};

/// Real profile on the grid with unit quadrature norm. Throws ContractError
/// when f cannot be normalised (zero, non-finite, or still off by more than
/// 1e-6 after rescaling).
std::vector<double> make_profile(const ProfileSpec& spec, const Grid& grid, const PhysicalConfig& cfg);

struct QubitState {
  GridState state;
  std::vector<double> profile;  // f, normalised
};

QubitState prepare(const std::vector<double>& profile, const Grid& grid, int bit);
QubitState prepare(const ProfileSpec& spec, const Grid& grid, const PhysicalConfig& cfg, int bit);
/// alpha |0> + beta |1>; (alpha, beta) is normalised.
QubitState prepare_superposition(const std::vector<double>& profile, const Grid& grid, cplx alpha, cplx beta);

struct Readout {
  double p0 = 0.0;  // x > 0
  double p1 = 0.0;  // x < 0
  double fidelity0 = 1.0;
  double fidelity1 = 1.0;

  int bit() const { return p0 >= p1 ? 0 : 1; }
  double confidence() const { return std::max(p0, p1); }
};

/// Side populations below this are reported as empty (profile fidelity 1).
inline constexpr double kEmptySide = 1e-10;

Readout readout(const QubitState& q);

/// (<f, psi_+>, <f, psi_->): the qubit amplitudes when the state lies in the
/// qubit space.
std::array<cplx, 2> amplitudes(const QubitState& q);

/// L2 distance of q from the qubit space spanned by (f, 0) and (0, f).
double qubit_space_residual(const QubitState& q);

/// Schedule whose execution applies phase_offset * target on the qubit space.
/// Bloch and +-I targets become one gate step (phase_offset -i); separating
/// diagonal targets a single closed step from diagonal_step; anything else
/// the Bloch steps of decompose_gate followed by one closed step whose V_0
/// absorbs exp(i xi) and the (-i)^k of the gate steps.
Schedule compile_gate(const UnitaryGate& target, const PhysicalConfig& cfg);

struct QubitRun {
  QubitState qubit;
  RunResult run;
};

QubitRun apply_schedule(const QubitState& q, const Schedule& schedule, const EngineOptions& options);

enum class Move { open, closed };

std::string to_string(Move m);

struct ClassicalRun {
  std::vector<int> bits;          // after each move
  std::vector<Readout> readouts;  // after each move
  Readout final_readout;
  bool decoherent = false;        // some readout fell inside (0.01, 0.99)
  QubitState final_state;
};

/// Open moves are sigma_1 half periods, closed moves -I half periods.
/// Throws ContractError unless the packet starts with >= 0.999 on one side.
ClassicalRun classical_run(const std::vector<Move>& moves, const QubitState& packet, const PhysicalConfig& cfg,
                           const EngineOptions& options);

inline constexpr double kDefaultThreshold = 0.99;

struct CnotResult {
  QubitState control;
  QubitState target;
  bool applied = false;
};

/// The control is kept closed for one half period; the target gate is opened
/// (sigma_1) iff the control is found on x > 0 with probability >= threshold.
/// Throws ContractError when the control is not classical at the threshold.
CnotResult cnot_trigger(const QubitState& control, const QubitState& target, const PhysicalConfig& cfg,
                        const EngineOptions& options, double threshold = kDefaultThreshold);

}  // namespace qabacus
