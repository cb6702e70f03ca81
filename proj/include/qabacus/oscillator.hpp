#pragma once

// Harmonic-oscillator eigenfunctions, the two-component eigenbases of the
// scale-invariant point interactions, and grid <-> modal conversion.

#include <cstddef>
#include <functional>
#include <vector>

#include "qabacus/kernels.hpp"
#include "qabacus/su2.hpp"

namespace qabacus {

struct PhysicalConfig {
  double mass = 1.0;
  double omega = 1.0;
  double hbar = 1.0;
  double interface_length = 1.0;  // L0 in the connection condition

  /// Throws std::invalid_argument on non-positive m, omega, hbar or L0 == 0.
  void validate() const;
  /// Oscillator length sqrt(hbar / (m omega)).
  double length() const;
  /// tau = pi / omega.
  double half_period() const;
  double energy_unit() const { return hbar * omega; }
};

/// Cell-centred uniform grid on (0, x_max]: x_j = (j + 1/2) h, h = x_max / nodes.
/// Integrals use the midpoint rule with weight h.
struct Grid {
  double x_max = 12.0;
  std::size_t nodes = 2048;

  static Grid make(double x_max, std::size_t nodes);
  /// Default shared grid: 12 oscillator lengths, 2048 nodes.
  static Grid standard(const PhysicalConfig& cfg, double lengths = 12.0, std::size_t nodes = 2048);

  double spacing() const { return x_max / static_cast<double>(nodes); }
  double x(std::size_t j) const { return (static_cast<double>(j) + 0.5) * spacing(); }
  std::vector<double> points() const;

  bool operator==(const Grid& other) const = default;
};

/// Two-component wavefunction (psi_plus(x), psi_minus(x)) sampled on a grid.
struct GridState {
  Grid grid;
  std::vector<cplx> plus;
  std::vector<cplx> minus;

  static GridState zeros(const Grid& grid);
  static GridState sample(const Grid& grid, const std::function<Vec2(double)>& psi);

  /// Integral of |psi_+|^2 + |psi_-|^2.
  double norm_squared() const;
  double plus_probability() const;
  double minus_probability() const;
  /// Pointwise action of a constant 2x2 matrix.
  GridState transformed(const Mat2& m) const;
  GridState scaled(cplx s) const;
  void normalize();
};

cplx inner(const GridState& a, const GridState& b);
/// |<a, b>|^2 / (|a|^2 |b|^2).
double fidelity(const GridState& a, const GridState& b);
double l2_distance(const GridState& a, const GridState& b);

/// Normalised oscillator eigenfunction u_n on the full line.
double ho_wavefunction(int n, double x, double length = 1.0);

/// Eigenbasis Phi_n^U of a scale-invariant gate.
///
/// For a Bloch gate U = W sigma_3 W^{-1}: Phi_n^U = W Phi_n^{sigma_3}, with
/// Phi_n^{sigma_3} = (sqrt2 u_n, 0) for even n and (0, -sqrt2 u_n) for odd n,
/// and energy (n + 1/2) hbar omega.
/// For U = +I (-I) the sides decouple: mode n lives on side n % 2 with the
/// even (odd) Hermite function of index 2 floor(n/2) (+1).
class ModalBasis {
 public:
  /// Throws ContractError for gates outside the scale-invariant family.
  explicit ModalBasis(const UnitaryGate& u);

  const UnitaryGate& gate() const noexcept { return gate_; }
  GateClass gate_class() const noexcept { return class_; }
  /// W, mapping sigma_3-frame components to physical components.
  const Mat2& rotation() const noexcept { return rotation_; }

  int side(int n) const;
  int hermite_index(int n) const;
  double factor(int n) const;
  /// Energy of mode n in units of hbar omega.
  double energy(int n) const;

  kernels::ModeLayout layout(int modes) const;
  /// Largest Hermite index touched by the first `modes` modes.
  int max_hermite(int modes) const;

  Vec2 evaluate(int n, double x, double length) const;

 private:
  UnitaryGate gate_;
  GateClass class_;
  Mat2 rotation_;
};

/// Phi_n^U(x) for scale-invariant U. Normalised on the half line.
Vec2 eigenfunction(const UnitaryGate& u, int n, double x, const PhysicalConfig& cfg = {});

/// u_n sampled on a grid for n < rows.
class HermiteTable {
 public:
  HermiteTable(const Grid& grid, double length, int rows);

  const Grid& grid() const noexcept { return grid_; }
  int rows() const noexcept { return rows_; }
  double length() const noexcept { return length_; }
  std::span<const double> data() const noexcept { return values_; }
  double operator()(int n, std::size_t j) const { return values_[n * grid_.nodes + j]; }

 private:
  Grid grid_;
  double length_;
  int rows_;
  std::vector<double> values_;
};

struct ModalState {
  UnitaryGate basis_gate = UnitaryGate::identity();
  std::vector<cplx> coeffs;

  double norm_squared() const;
};

struct Projection {
  ModalState state;
  double truncation_loss = 0.0;  // |state|^2 - sum |a_n|^2
  bool loss_warning = false;     // truncation_loss > 1e-6
};

inline constexpr int kDefaultModes = 128;

Projection project(const GridState& state, const ModalBasis& basis, const HermiteTable& table, int modes);
Projection project(const GridState& state, const UnitaryGate& u, int modes, const PhysicalConfig& cfg);

GridState synthesize(const ModalState& modal, const ModalBasis& basis, const HermiteTable& table);
GridState synthesize(const ModalState& modal, const Grid& grid, const PhysicalConfig& cfg);

}  // namespace qabacus
