#pragma once

// Algebra of 2x2 unitary matrices: Pauli expansion, the Bloch-sphere family
// sigma(c), conjugation, diagonalisation and lowering of arbitrary U(2)
// targets into at most four Bloch-sphere steps.

#include <array>
#include <complex>
#include <random>
#include <string>
#include <vector>

namespace qabacus {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;  // row-major: {a, b, c, d} = [[a, b], [c, d]]
using Vec2 = std::array<cplx, 2>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

namespace mat2 {

Mat2 identity();
Mat2 pauli(int axis);  // axis in {1, 2, 3}
Mat2 multiply(const Mat2& a, const Mat2& b);
Mat2 adjoint(const Mat2& a);
Mat2 add(const Mat2& a, const Mat2& b);
Mat2 scale(cplx s, const Mat2& a);
Vec2 apply(const Mat2& a, const Vec2& v);
cplx det(const Mat2& a);
cplx trace(const Mat2& a);
double max_abs_diff(const Mat2& a, const Mat2& b);
/// Largest entry of |U^dagger U - I|.
double unitarity_defect(const Mat2& a);
/// Eigenvalues of a normal 2x2 matrix, unordered.
std::array<cplx, 2> eigenvalues(const Mat2& a);

}  // namespace mat2

/// A validated element of U(2).
class UnitaryGate {
 public:
  /// Throws std::invalid_argument if `m` is not unitary within the algebraic
  /// tolerance.
  explicit UnitaryGate(const Mat2& m);

  static UnitaryGate identity();
  static UnitaryGate minus_identity();
  static UnitaryGate sigma(int axis);
  static UnitaryGate hadamard();

  const Mat2& matrix() const noexcept { return m_; }
  cplx operator()(int row, int col) const { return m_[2 * row + col]; }

  UnitaryGate adjoint() const;
  UnitaryGate operator*(const UnitaryGate& other) const;

 private:
  Mat2 m_;
};

/// Unit vector c selecting sigma(c) = c1 s1 + c2 s2 + c3 s3.
class BlochVector {
 public:
  /// Throws std::invalid_argument unless |c| = 1 within tolerance.
  explicit BlochVector(const std::array<double, 3>& c);
  /// c = (sin mu cos nu, sin mu sin nu, cos mu).
  static BlochVector from_angles(double mu, double nu);

  const std::array<double, 3>& components() const noexcept { return c_; }
  double operator[](int i) const { return c_[i]; }
  /// (mu, nu) with 0 <= mu <= pi and 0 <= nu < 2 pi.
  std::array<double, 2> angles() const;

 private:
  std::array<double, 3> c_;
};

/// diag(exp(i theta_plus), exp(i theta_minus)), angles reduced to [0, 2 pi).
struct DiagonalGate {
  double theta_plus = 0.0;
  double theta_minus = 0.0;

  Mat2 matrix() const;
};

struct PauliCoefficients {
  cplx c0;
  std::array<cplx, 3> c;
};

PauliCoefficients pauli_decompose(const Mat2& u);
Mat2 pauli_compose(const PauliCoefficients& p);

UnitaryGate bloch_matrix(double mu, double nu);
UnitaryGate bloch_matrix(const BlochVector& c);

/// W in SU(2) with W sigma_3 W^{-1} = sigma(c); the first column of W is the
/// +1 eigenvector of sigma(c) with its first nonzero component real positive.
UnitaryGate bloch_frame(const BlochVector& c);

/// V U V^{-1}. Any unitary V is accepted.
UnitaryGate conjugate(const UnitaryGate& u, const UnitaryGate& v);

struct Diagonalization {
  UnitaryGate v;  // in SU(2), with V U V^{-1} = D
  DiagonalGate d;
};

/// Eigen-decomposition with theta_plus <= theta_minus. The eigenvector of
/// exp(i theta_plus) has its first nonzero component real and positive; the
/// second row of V is fixed by det V = 1. Scalar matrices give V = I.
Diagonalization diagonalize(const UnitaryGate& u);

enum class GateClass {
  scale_invariant_bloch,
  plus_identity,
  minus_identity,
  separating_diagonal,
  generic,
};

std::string to_string(GateClass c);

/// Classes are tested in declaration order; the first match wins.
GateClass classify(const UnitaryGate& u);

/// Gates whose half-period evolution is exactly -iU.
bool is_scale_invariant(GateClass c);

/// One element of a decomposition: a Bloch-sphere matrix or the literal +-I.
struct GateStep {
  enum class Kind { bloch, plus_identity, minus_identity };
  Kind kind = Kind::bloch;
  std::array<double, 3> c{0.0, 0.0, 1.0};  // meaningful for Kind::bloch only

  static GateStep bloch(const BlochVector& v);
  static GateStep plus_identity();
  static GateStep minus_identity();

  UnitaryGate gate() const;
};

struct GateDecomposition {
  double xi = 0.0;
  /// In application (time) order: steps.front() acts first.
  std::vector<GateStep> steps;
  Mat2 target{};

  /// exp(i xi) * steps.back() * ... * steps.front().
  Mat2 product() const;
};

/// Writes U = exp(i xi) sigma(c) sigma(a) sigma(b) sigma(c) with a = (1,0,0)
/// and b in the equatorial plane, and shortens the list whenever U is
/// already +-I, a Bloch element, a scalar, diagonal, or a phase times a
/// Bloch element.
GateDecomposition decompose_gate(const UnitaryGate& u);

/// U = exp(i phi) (a0 I + i a.sigma) with (a0, a) Gaussian-normalised (Haar on
/// SU(2)) and phi uniform.
UnitaryGate sample_unitary(std::mt19937_64& rng);
/// Uniform point on the unit sphere.
BlochVector sample_bloch(std::mt19937_64& rng);

}  // namespace qabacus
