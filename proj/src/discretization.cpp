#include "qabacus/discretization.hpp"

#include <cmath>
#include <string>

#include "qabacus/errors.hpp"

namespace qabacus {

double robin_ghost_factor(double theta, double interface_length, double h) {
  const double s = std::sin(0.5 * theta);
  const double c = std::cos(0.5 * theta);
  const double k = 2.0 * interface_length / h;
  const double num = s + k * c;
  const double den = s - k * c;
  if (std::abs(den) <= 1e-12 * (std::abs(s) + std::abs(k * c))) {
    throw ContractError("Robin condition with theta = " + std::to_string(theta) +
                        " is singular on this grid spacing; change the node count");
  }
  return -num / den;
}

Mat2 ghost_reflection(const UnitaryGate& u, double interface_length, double h) {
  if (is_scale_invariant(classify(u))) return u.matrix();
  const Diagonalization d = diagonalize(u);
  const Mat2 r{robin_ghost_factor(d.d.theta_plus, interface_length, h), 0.0, 0.0,
               robin_ghost_factor(d.d.theta_minus, interface_length, h)};
  const Mat2& v = d.v.matrix();
  return mat2::multiply(mat2::multiply(mat2::adjoint(v), r), v);
}

namespace {

double background(const PhysicalConfig& cfg, double x) {
  return 0.5 * cfg.mass * cfg.omega * cfg.omega * x * x;
}

}  // namespace

kernels::Tridiagonal unfolded_hamiltonian(const UnitaryGate& u, const PhysicalConfig& cfg, const Grid& grid,
                                          const SidePotentials& pot) {
  const std::size_t m = grid.nodes;
  const double h = grid.spacing();
  const double c = cfg.hbar * cfg.hbar / (2.0 * cfg.mass * h * h);
  const Mat2 r = ghost_reflection(u, cfg.interface_length, h);

  kernels::Tridiagonal t;
  t.diag.resize(2 * m);
  t.lower.assign(2 * m, cplx(-c));
  t.upper.assign(2 * m, cplx(-c));
  for (std::size_t j = 0; j < m; ++j) {
    const double v = background(cfg, grid.x(j)) + pot.zero;
    t.diag[m - 1 - j] = 2.0 * c + v + pot.minus;
    t.diag[m + j] = 2.0 * c + v + pot.plus;
  }
  // Innermost nodes: psi_-(x_0) at m-1, psi_+(x_0) at m.
  t.diag[m] -= c * r[0].real();
  t.diag[m - 1] -= c * r[3].real();
  t.lower[m] = -c * r[1];
  t.upper[m - 1] = -c * r[2];
  t.lower[0] = 0.0;
  t.upper[2 * m - 1] = 0.0;
  return t;
}

kernels::SturmMatrix half_line_hamiltonian(double theta, const PhysicalConfig& cfg, const Grid& grid) {
  const std::size_t m = grid.nodes;
  const double h = grid.spacing();
  const double c = cfg.hbar * cfg.hbar / (2.0 * cfg.mass * h * h);
  kernels::SturmMatrix s;
  s.diag.resize(m);
  s.offdiag_sq.assign(m - 1, c * c);
  for (std::size_t j = 0; j < m; ++j) s.diag[j] = 2.0 * c + background(cfg, grid.x(j));
  s.diag[0] -= c * robin_ghost_factor(theta, cfg.interface_length, h);
  return s;
}

kernels::SturmMatrix sturm_matrix(const kernels::Tridiagonal& h) {
  kernels::SturmMatrix s;
  s.diag = h.diag;
  s.offdiag_sq.resize(h.size() - 1);
  for (std::size_t k = 0; k + 1 < h.size(); ++k) s.offdiag_sq[k] = std::norm(h.upper[k]);
  return s;
}

std::vector<cplx> unfold(const GridState& s) {
  const std::size_t m = s.grid.nodes;
  std::vector<cplx> chain(2 * m);
  for (std::size_t j = 0; j < m; ++j) {
    chain[m - 1 - j] = s.minus[j];
    chain[m + j] = s.plus[j];
  }
  return chain;
}

GridState fold(std::span<const cplx> chain, const Grid& grid) {
  const std::size_t m = grid.nodes;
  GridState s = GridState::zeros(grid);
  for (std::size_t j = 0; j < m; ++j) {
    s.minus[j] = chain[m - 1 - j];
    s.plus[j] = chain[m + j];
  }
  return s;
}

}  // namespace qabacus
