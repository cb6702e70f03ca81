#pragma once

// Finite-difference Hamiltonian shared by the Crank-Nicolson engine and the
// spectral oracle.
//
// The two half lines are "unfolded" into one chain: minus-side nodes in
// reverse order, then plus-side nodes. Each side has a ghost node at -h/2;
// the discretised connection condition
//   (U - I)(g + Psi_1)/2 + i L0 (U + I)(Psi_1 - g)/h = 0
// gives g = R Psi_1 with R Hermitian, so the interface only couples the two
// innermost nodes and the chain stays tridiagonal and Hermitian.

#include <span>
#include <vector>

#include "qabacus/kernels.hpp"
#include "qabacus/oscillator.hpp"
#include "qabacus/su2.hpp"

namespace qabacus {

/// Constant potentials added to the harmonic background: `plus` on x > 0,
/// `minus` on x < 0, `zero` everywhere.
struct SidePotentials {
  double plus = 0.0;
  double minus = 0.0;
  double zero = 0.0;
};

/// Ghost factor r for the per-side Robin condition of eigenphase theta:
/// g = r psi_1. Throws ContractError when the discrete condition pins the
/// node instead (tan(theta/2) = 2 L0 / h).
double robin_ghost_factor(double theta, double interface_length, double h);

/// R with g = R Psi_1. Equals U for scale-invariant gates.
Mat2 ghost_reflection(const UnitaryGate& u, double interface_length, double h);

kernels::Tridiagonal unfolded_hamiltonian(const UnitaryGate& u, const PhysicalConfig& cfg, const Grid& grid,
                                          const SidePotentials& pot = {});

/// Single half line with a Robin condition of eigenphase theta and a hard
/// wall past x_max.
kernels::SturmMatrix half_line_hamiltonian(double theta, const PhysicalConfig& cfg, const Grid& grid);

kernels::SturmMatrix sturm_matrix(const kernels::Tridiagonal& h);

std::vector<cplx> unfold(const GridState& s);
GridState fold(std::span<const cplx> chain, const Grid& grid);

}  // namespace qabacus
