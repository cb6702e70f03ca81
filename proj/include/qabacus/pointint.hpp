#pragma once

// The connection condition (U - I) Psi(0) + i L0 (U + I) Psi'(0) = 0:
// residuals, free-line scattering, and spectra of the harmonic trap with a
// point interaction at the origin.

#include <string>
#include <vector>

#include "qabacus/oscillator.hpp"
#include "qabacus/su2.hpp"

namespace qabacus {

struct PointInteraction {
  UnitaryGate gate = UnitaryGate::sigma(1);
  double interface_length = 1.0;  // L0, nonzero

  GateClass gate_class() const { return classify(gate); }
};

/// (U - I) psi0 + i L0 (U + I) dpsi0.
Vec2 connection_residual(const PointInteraction& pi, const Vec2& psi0, const Vec2& dpsi0);

struct ScatteringAmplitudes {
  double k = 0.0;
  cplx t_lr, r_lr;  // incident from x < 0
  cplx t_rl, r_rl;  // incident from x > 0
};

/// Plane-wave scattering on the free line (no trap). Throws
/// std::invalid_argument for k <= 0.
ScatteringAmplitudes scattering_amplitudes(const PointInteraction& pi, double k);

enum class SpectrumMethod { exact, analytic_gamma, finite_difference };

std::string to_string(SpectrumMethod m);

struct SpectrumResult {
  std::vector<double> levels;     // ascending, units of hbar omega
  std::vector<double> residuals;  // boundary-condition residual per level
  SpectrumMethod method = SpectrumMethod::exact;
  std::string boundary;           // theta value or gate class
};

/// Lowest `count` levels of the half-line oscillator with
/// psi(0) + L0 cot(theta/2) psi'(0) = 0. theta = 0 (Neumann) and theta = pi
/// (Dirichlet) are dispatched before any cotangent is formed.
SpectrumResult robin_levels(double theta, const PhysicalConfig& cfg, int count);

/// Levels of the full two-sided problem: exact half-integers on the Bloch
/// sphere, merged Neumann/Dirichlet ladders for +-I, otherwise the merged
/// Robin spectra of the two eigenphases.
SpectrumResult spectrum(const PointInteraction& pi, const PhysicalConfig& cfg, int count);

/// Finite-difference oracle resolution. Second-order in h.
struct FdGrid {
  double lengths = 12.0;     // box size in oscillator lengths
  int nodes_per_length = 128;

  Grid grid(const PhysicalConfig& cfg) const;
};

/// Eigenvalues of the discretised half-line Robin problem (Sturm bisection).
SpectrumResult fd_oracle_levels(double theta, const PhysicalConfig& cfg, const FdGrid& fd, int count);

/// Eigenvalues of the coupled two-component discretisation for any gate.
SpectrumResult fd_oracle_levels(const UnitaryGate& u, const PhysicalConfig& cfg, const FdGrid& fd, int count);

}  // namespace qabacus
