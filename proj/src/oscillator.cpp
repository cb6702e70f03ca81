#include "qabacus/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qabacus/errors.hpp"
#include "qabacus/numeric_policy.hpp"

namespace qabacus {

void PhysicalConfig::validate() const {
  if (!(mass > 0.0) || !(omega > 0.0) || !(hbar > 0.0)) {
    throw std::invalid_argument("mass, omega and hbar must be positive");
  }
  if (interface_length == 0.0 || !std::isfinite(interface_length)) {
    throw std::invalid_argument("interface length L0 must be finite and nonzero");
  }
}

double PhysicalConfig::length() const { return std::sqrt(hbar / (mass * omega)); }
double PhysicalConfig::half_period() const { return kPi / omega; }

Grid Grid::make(double x_max, std::size_t nodes) {
  if (!(x_max > 0.0) || nodes < 8) throw std::invalid_argument("grid needs x_max > 0 and at least 8 nodes");
  return {x_max, nodes};
}

Grid Grid::standard(const PhysicalConfig& cfg, double lengths, std::size_t nodes) {
  return make(lengths * cfg.length(), nodes);
}

std::vector<double> Grid::points() const {
  std::vector<double> xs(nodes);
  for (std::size_t j = 0; j < nodes; ++j) xs[j] = x(j);
  return xs;
}

GridState GridState::zeros(const Grid& grid) {
  return {grid, std::vector<cplx>(grid.nodes), std::vector<cplx>(grid.nodes)};
}

GridState GridState::sample(const Grid& grid, const std::function<Vec2(double)>& psi) {
  GridState s = zeros(grid);
  for (std::size_t j = 0; j < grid.nodes; ++j) {
    const Vec2 v = psi(grid.x(j));
    s.plus[j] = v[0];
    s.minus[j] = v[1];
  }
  return s;
}

namespace {

double side_norm(const std::vector<cplx>& v, double h) {
  double acc = 0.0;
  for (const cplx& z : v) acc += std::norm(z);
  return acc * h;
}

void require_same_grid(const GridState& a, const GridState& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("states live on different grids");
}

}  // namespace

double GridState::plus_probability() const { return side_norm(plus, grid.spacing()); }
double GridState::minus_probability() const { return side_norm(minus, grid.spacing()); }
double GridState::norm_squared() const { return plus_probability() + minus_probability(); }

GridState GridState::transformed(const Mat2& m) const {
  GridState out = zeros(grid);
  for (std::size_t j = 0; j < grid.nodes; ++j) {
    const Vec2 v = mat2::apply(m, {plus[j], minus[j]});
    out.plus[j] = v[0];
    out.minus[j] = v[1];
  }
  return out;
}

GridState GridState::scaled(cplx s) const { return transformed(mat2::scale(s, mat2::identity())); }

void GridState::normalize() {
  const double n = std::sqrt(norm_squared());
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("cannot normalise a zero state");
  for (cplx& z : plus) z /= n;
  for (cplx& z : minus) z /= n;
}

cplx inner(const GridState& a, const GridState& b) {
  require_same_grid(a, b);
  cplx acc = 0.0;
  for (std::size_t j = 0; j < a.grid.nodes; ++j) {
    acc += std::conj(a.plus[j]) * b.plus[j] + std::conj(a.minus[j]) * b.minus[j];
  }
  return acc * a.grid.spacing();
}

double fidelity(const GridState& a, const GridState& b) {
  return std::norm(inner(a, b)) / (a.norm_squared() * b.norm_squared());
}

double l2_distance(const GridState& a, const GridState& b) {
  require_same_grid(a, b);
  double acc = 0.0;
  for (std::size_t j = 0; j < a.grid.nodes; ++j) {
    acc += std::norm(a.plus[j] - b.plus[j]) + std::norm(a.minus[j] - b.minus[j]);
  }
  return std::sqrt(acc * a.grid.spacing());
}

double ho_wavefunction(int n, double x, double length) {
  return kernels::hermite_function(n, x, length);
}

ModalBasis::ModalBasis(const UnitaryGate& u) : gate_(u), class_(classify(u)), rotation_(mat2::identity()) {
  if (!is_scale_invariant(class_)) {
    throw ContractError("modal basis needs a scale-invariant gate (Bloch sphere or +-I), got " +
                        to_string(class_));
  }
  if (class_ == GateClass::scale_invariant_bloch) {
    const PauliCoefficients p = pauli_decompose(u.matrix());
    const double c1 = p.c[0].real(), c2 = p.c[1].real(), c3 = p.c[2].real();
    const double n = std::sqrt(c1 * c1 + c2 * c2 + c3 * c3);
    rotation_ = bloch_frame(BlochVector({c1 / n, c2 / n, c3 / n})).matrix();
  }
}

int ModalBasis::side(int n) const { return n % 2; }

int ModalBasis::hermite_index(int n) const {
  switch (class_) {
    case GateClass::plus_identity: return 2 * (n / 2);
    case GateClass::minus_identity: return 2 * (n / 2) + 1;
    default: return n;
  }
}

double ModalBasis::factor(int n) const {
  const double s = std::sqrt(2.0);
  if (class_ == GateClass::scale_invariant_bloch && n % 2 == 1) return -s;
  return s;
}

double ModalBasis::energy(int n) const { return hermite_index(n) + 0.5; }

kernels::ModeLayout ModalBasis::layout(int modes) const {
  kernels::ModeLayout l;
  for (int n = 0; n < modes; ++n) {
    l.side.push_back(side(n));
    l.hermite.push_back(hermite_index(n));
    l.factor.push_back(factor(n));
  }
  return l;
}

int ModalBasis::max_hermite(int modes) const {
  int m = 0;
  for (int n = 0; n < modes; ++n) m = std::max(m, hermite_index(n));
  return m;
}

Vec2 ModalBasis::evaluate(int n, double x, double length) const {
  Vec2 frame{0.0, 0.0};
  frame[side(n)] = factor(n) * ho_wavefunction(hermite_index(n), x, length);
  return mat2::apply(rotation_, frame);
}

Vec2 eigenfunction(const UnitaryGate& u, int n, double x, const PhysicalConfig& cfg) {
  if (n < 0) throw std::invalid_argument("mode index must be non-negative");
  return ModalBasis(u).evaluate(n, x, cfg.length());
}

HermiteTable::HermiteTable(const Grid& grid, double length, int rows)
    : grid_(grid), length_(length), rows_(rows), values_(static_cast<std::size_t>(rows) * grid.nodes) {
  const std::vector<double> xs = grid.points();
  kernels::parallel::hermite_table(xs, length, rows, values_);
}

double ModalState::norm_squared() const {
  double acc = 0.0;
  for (const cplx& a : coeffs) acc += std::norm(a);
  return acc;
}

Projection project(const GridState& state, const ModalBasis& basis, const HermiteTable& table, int modes) {
  if (!(table.grid() == state.grid)) throw std::invalid_argument("Hermite table built on a different grid");
  if (basis.max_hermite(modes) >= table.rows()) throw std::invalid_argument("Hermite table has too few rows");
  const GridState frame = state.transformed(mat2::adjoint(basis.rotation()));
  Projection out{{basis.gate(), std::vector<cplx>(modes)}, 0.0, false};
  kernels::parallel::project(table.data(), state.grid.nodes, basis.layout(modes), frame.plus, frame.minus,
                             state.grid.spacing(), out.state.coeffs);
  out.truncation_loss = state.norm_squared() - out.state.norm_squared();
  out.loss_warning = out.truncation_loss > 1e-6;
  return out;
}

Projection project(const GridState& state, const UnitaryGate& u, int modes, const PhysicalConfig& cfg) {
  const ModalBasis basis(u);
  const HermiteTable table(state.grid, cfg.length(), basis.max_hermite(modes) + 1);
  return project(state, basis, table, modes);
}

GridState synthesize(const ModalState& modal, const ModalBasis& basis, const HermiteTable& table) {
  const int modes = static_cast<int>(modal.coeffs.size());
  if (basis.max_hermite(modes) >= table.rows()) throw std::invalid_argument("Hermite table has too few rows");
  GridState frame = GridState::zeros(table.grid());
  kernels::parallel::synthesize(table.data(), table.grid().nodes, basis.layout(modes), modal.coeffs, frame.plus,
                                frame.minus);
  return frame.transformed(basis.rotation());
}

GridState synthesize(const ModalState& modal, const Grid& grid, const PhysicalConfig& cfg) {
  const ModalBasis basis(modal.basis_gate);
  const int modes = static_cast<int>(modal.coeffs.size());
  const HermiteTable table(grid, cfg.length(), basis.max_hermite(modes) + 1);
  return synthesize(modal, basis, table);
}

}  // namespace qabacus
