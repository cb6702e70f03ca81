#include "qabacus/su2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qabacus/numeric_policy.hpp"

namespace qabacus {

namespace mat2 {

Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

Mat2 pauli(int axis) {
  switch (axis) {
    case 1: return {0.0, 1.0, 1.0, 0.0};
    case 2: return {0.0, -kI, kI, 0.0};
    case 3: return {1.0, 0.0, 0.0, -1.0};
    default: throw std::invalid_argument("pauli axis must be 1, 2 or 3");
  }
}

Mat2 multiply(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 adjoint(const Mat2& a) {
  return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}

Mat2 add(const Mat2& a, const Mat2& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

Mat2 scale(cplx s, const Mat2& a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }

Vec2 apply(const Mat2& a, const Vec2& v) {
  return {a[0] * v[0] + a[1] * v[1], a[2] * v[0] + a[3] * v[1]};
}

cplx det(const Mat2& a) { return a[0] * a[3] - a[1] * a[2]; }
cplx trace(const Mat2& a) { return a[0] + a[3]; }

double max_abs_diff(const Mat2& a, const Mat2& b) {
  double m = 0.0;
  for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double unitarity_defect(const Mat2& a) {
  return max_abs_diff(multiply(adjoint(a), a), identity());
}

std::array<cplx, 2> eigenvalues(const Mat2& a) {
  const cplx half_tr = 0.5 * trace(a);
  const cplx disc = std::sqrt(half_tr * half_tr - det(a));
  return {half_tr + disc, half_tr - disc};
}

}  // namespace mat2

namespace {

double wrap_angle(double theta) {
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  // Snap roundoff just below 2 pi back to 0 so +1 eigenvalues sort first.
  if (2.0 * kPi - t < 1e-13) t = 0.0;
  return t;
}

// SU(2) part and Pauli axis of U = exp(i phi) (a0 I + i a.sigma).
struct AxisForm {
  double phi;
  double a0;
  std::array<double, 3> a;
};

AxisForm axis_form(const Mat2& u) {
  const double phi = 0.5 * std::arg(mat2::det(u));
  const Mat2 w = mat2::scale(std::exp(-kI * phi), u);
  const PauliCoefficients p = pauli_decompose(w);
  // w = a0 I + i a.sigma, so c_k = i a_k.
  return {phi, p.c0.real(), {p.c[0].imag(), p.c[1].imag(), p.c[2].imag()}};
}

// Normalised +1 eigenvector of n.sigma for a unit axis n, first nonzero
// component real and positive.
Vec2 plus_eigenvector(const std::array<double, 3>& n) {
  Vec2 v;
  if (n[2] >= 0.0) {
    v = {cplx(1.0 + n[2], 0.0), cplx(n[0], n[1])};
  } else {
    v = {cplx(n[0], -n[1]), cplx(1.0 - n[2], 0.0)};
  }
  const double norm = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  v[0] /= norm;
  v[1] /= norm;
  const double tiny = kTolerance.algebraic;
  const cplx lead = std::abs(v[0]) > tiny ? v[0] : v[1];
  const cplx phase = std::conj(lead) / std::abs(lead);
  v[0] *= phase;
  v[1] *= phase;
  if (std::abs(v[0]) <= tiny) v[0] = 0.0;
  return v;
}

// SU(2) matrix whose first column is v.
Mat2 su2_with_first_column(const Vec2& v) {
  return {v[0], -std::conj(v[1]), v[1], std::conj(v[0])};
}

}  // namespace

UnitaryGate::UnitaryGate(const Mat2& m) : m_(m) {
  const double defect = mat2::unitarity_defect(m);
  if (!(defect <= kTolerance.algebraic)) {
    throw std::invalid_argument("matrix is not unitary (defect " + std::to_string(defect) + ")");
  }
}

UnitaryGate UnitaryGate::identity() { return UnitaryGate(mat2::identity()); }
UnitaryGate UnitaryGate::minus_identity() { return UnitaryGate(mat2::scale(-1.0, mat2::identity())); }
UnitaryGate UnitaryGate::sigma(int axis) { return UnitaryGate(mat2::pauli(axis)); }

UnitaryGate UnitaryGate::hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return UnitaryGate(Mat2{s, s, s, -s});
}

UnitaryGate UnitaryGate::adjoint() const { return UnitaryGate(mat2::adjoint(m_)); }

UnitaryGate UnitaryGate::operator*(const UnitaryGate& other) const {
  return UnitaryGate(mat2::multiply(m_, other.m_));
}

BlochVector::BlochVector(const std::array<double, 3>& c) : c_(c) {
  const double norm = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  if (!(std::abs(norm - 1.0) <= kTolerance.algebraic)) {
    throw std::invalid_argument("Bloch vector must have unit length");
  }
}

BlochVector BlochVector::from_angles(double mu, double nu) {
  return BlochVector({std::sin(mu) * std::cos(nu), std::sin(mu) * std::sin(nu), std::cos(mu)});
}

std::array<double, 2> BlochVector::angles() const {
  const double mu = std::acos(std::clamp(c_[2], -1.0, 1.0));
  const double rho = std::hypot(c_[0], c_[1]);
  const double nu = rho > 0.0 ? wrap_angle(std::atan2(c_[1], c_[0])) : 0.0;
  return {mu, nu};
}

Mat2 DiagonalGate::matrix() const {
  return {std::exp(kI * theta_plus), 0.0, 0.0, std::exp(kI * theta_minus)};
}

PauliCoefficients pauli_decompose(const Mat2& u) {
  // u = [[c0 + c3, c1 - i c2], [c1 + i c2, c0 - c3]]
  return {0.5 * (u[0] + u[3]), {0.5 * (u[1] + u[2]), 0.5 * kI * (u[1] - u[2]), 0.5 * (u[0] - u[3])}};
}

Mat2 pauli_compose(const PauliCoefficients& p) {
  return {p.c0 + p.c[2], p.c[0] - kI * p.c[1], p.c[0] + kI * p.c[1], p.c0 - p.c[2]};
}

UnitaryGate bloch_frame(const BlochVector& c) {
  return UnitaryGate(su2_with_first_column(plus_eigenvector(c.components())));
}

UnitaryGate bloch_matrix(const BlochVector& c) {
  return UnitaryGate(pauli_compose({0.0, {c[0], c[1], c[2]}}));
}

UnitaryGate bloch_matrix(double mu, double nu) {
  return bloch_matrix(BlochVector::from_angles(mu, nu));
}

UnitaryGate conjugate(const UnitaryGate& u, const UnitaryGate& v) {
  return UnitaryGate(mat2::multiply(mat2::multiply(v.matrix(), u.matrix()), mat2::adjoint(v.matrix())));
}

Diagonalization diagonalize(const UnitaryGate& u) {
  const AxisForm f = axis_form(u.matrix());
  const double len = std::sqrt(f.a[0] * f.a[0] + f.a[1] * f.a[1] + f.a[2] * f.a[2]);
  if (len <= kTolerance.algebraic) {
    const double theta = wrap_angle(f.a0 >= 0.0 ? f.phi : f.phi + kPi);
    return {UnitaryGate::identity(), {theta, theta}};
  }
  // Eigenvalues exp(i(phi +- alpha)) on the axis directions +-n.
  const double alpha = std::atan2(len, f.a0);
  const std::array<double, 3> n{f.a[0] / len, f.a[1] / len, f.a[2] / len};
  double theta_up = wrap_angle(f.phi + alpha);
  double theta_down = wrap_angle(f.phi - alpha);
  std::array<double, 3> axis = n;
  if (theta_up > theta_down) {
    std::swap(theta_up, theta_down);
    axis = {-n[0], -n[1], -n[2]};
  }
  const Vec2 v_plus = plus_eigenvector(axis);
  // Columns of V^dagger are the eigenvectors.
  const Mat2 v_dag = su2_with_first_column(v_plus);
  return {UnitaryGate(mat2::adjoint(v_dag)), {theta_up, theta_down}};
}

std::string to_string(GateClass c) {
  switch (c) {
    case GateClass::scale_invariant_bloch: return "scale_invariant_bloch";
    case GateClass::plus_identity: return "plus_identity";
    case GateClass::minus_identity: return "minus_identity";
    case GateClass::separating_diagonal: return "separating_diagonal";
    case GateClass::generic: return "generic";
  }
  return "unknown";
}

GateClass classify(const UnitaryGate& u) {
  const Mat2& m = u.matrix();
  const double tol = kTolerance.algebraic;
  const bool hermitian = mat2::max_abs_diff(m, mat2::adjoint(m)) <= tol;
  if (hermitian && std::abs(mat2::trace(m)) <= tol) return GateClass::scale_invariant_bloch;
  if (mat2::max_abs_diff(m, mat2::identity()) <= tol) return GateClass::plus_identity;
  if (mat2::max_abs_diff(m, mat2::scale(-1.0, mat2::identity())) <= tol) return GateClass::minus_identity;
  if (std::abs(m[1]) <= tol && std::abs(m[2]) <= tol) return GateClass::separating_diagonal;
  return GateClass::generic;
}

bool is_scale_invariant(GateClass c) {
  return c == GateClass::scale_invariant_bloch || c == GateClass::plus_identity ||
         c == GateClass::minus_identity;
}

GateStep GateStep::bloch(const BlochVector& v) { return {Kind::bloch, v.components()}; }
GateStep GateStep::plus_identity() { return {Kind::plus_identity, {0.0, 0.0, 1.0}}; }
GateStep GateStep::minus_identity() { return {Kind::minus_identity, {0.0, 0.0, 1.0}}; }

UnitaryGate GateStep::gate() const {
  switch (kind) {
    case Kind::plus_identity: return UnitaryGate::identity();
    case Kind::minus_identity: return UnitaryGate::minus_identity();
    case Kind::bloch: break;
  }
  return bloch_matrix(BlochVector(c));
}

Mat2 GateDecomposition::product() const {
  Mat2 acc = mat2::identity();
  for (const GateStep& s : steps) acc = mat2::multiply(s.gate().matrix(), acc);
  return mat2::scale(std::exp(kI * xi), acc);
}

namespace {

BlochVector unit_bloch(double c1, double c2, double c3) {
  const double n = std::sqrt(c1 * c1 + c2 * c2 + c3 * c3);
  return BlochVector({c1 / n, c2 / n, c3 / n});
}

// Hermitian traceless unitary -> its Bloch vector.
BlochVector bloch_of(const Mat2& h) {
  const PauliCoefficients p = pauli_decompose(h);
  return unit_bloch(p.c[0].real(), p.c[1].real(), p.c[2].real());
}

// diag(e^{i theta+}, e^{i theta-}) = e^{i xi} sigma(a) sigma(b), with
// sigma(1,0,0) sigma(cos d, sin d, 0) = diag(e^{i d}, e^{-i d}).
void append_equatorial_pair(double theta_plus, double theta_minus, GateDecomposition& out) {
  const double delta = 0.5 * (theta_plus - theta_minus);
  out.xi += 0.5 * (theta_plus + theta_minus);
  out.steps.push_back(GateStep::bloch(unit_bloch(std::cos(delta), std::sin(delta), 0.0)));
  out.steps.push_back(GateStep::bloch(BlochVector({1.0, 0.0, 0.0})));
}

}  // namespace

GateDecomposition decompose_gate(const UnitaryGate& u) {
  GateDecomposition out;
  out.target = u.matrix();
  const Mat2& m = u.matrix();
  switch (classify(u)) {
    case GateClass::plus_identity:
      out.steps = {GateStep::plus_identity()};
      return out;
    case GateClass::minus_identity:
      out.steps = {GateStep::minus_identity()};
      return out;
    case GateClass::scale_invariant_bloch:
      out.steps = {GateStep::bloch(bloch_of(m))};
      return out;
    case GateClass::separating_diagonal: {
      const double tp = std::arg(m[0]);
      const double tm = std::arg(m[3]);
      if (std::abs(std::remainder(tp - tm, 2.0 * kPi)) <= kTolerance.algebraic) {
        out.xi = tp;
        out.steps = {GateStep::plus_identity()};
        return out;
      }
      append_equatorial_pair(tp, tm, out);
      return out;
    }
    case GateClass::generic: break;
  }

  const Diagonalization diag = diagonalize(u);
  const double tp = diag.d.theta_plus;
  const double tm = diag.d.theta_minus;
  if (std::abs(std::remainder(tm - tp - kPi, 2.0 * kPi)) <= kTolerance.algebraic) {
    // Phase times a Bloch element: e^{-i theta+} U is Hermitian traceless.
    out.xi = tp;
    out.steps = {GateStep::bloch(bloch_of(mat2::scale(std::exp(-kI * tp), m)))};
    return out;
  }

  // U = W D W^dagger with W = V^dagger = [[alpha, -conj(beta)], [beta, conj(alpha)]]
  // and alpha >= 0 real. S = W diag(1, -1) is Hermitian traceless with
  // S D S = U, i.e. S = sigma(Re beta, Im beta, alpha).
  const Mat2 w = mat2::adjoint(diag.v.matrix());
  const cplx alpha = w[0];
  const cplx beta = w[2];
  const BlochVector c = unit_bloch(beta.real(), beta.imag(), alpha.real());
  out.steps.push_back(GateStep::bloch(c));
  append_equatorial_pair(tp, tm, out);
  out.steps.push_back(GateStep::bloch(c));
  return out;
}

UnitaryGate sample_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::array<double, 4> a{};
  double norm = 0.0;
  while (norm < 1e-6) {
    for (double& x : a) x = gauss(rng);
    norm = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]);
  }
  for (double& x : a) x /= norm;
  const double phi = angle(rng);
  const Mat2 su = pauli_compose({a[0], {kI * a[1], kI * a[2], kI * a[3]}});
  return UnitaryGate(mat2::scale(std::exp(kI * phi), su));
}

BlochVector sample_bloch(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double x = 0, y = 0, z = 0, n = 0;
  while (n < 1e-6) {
    x = gauss(rng);
    y = gauss(rng);
    z = gauss(rng);
    n = std::sqrt(x * x + y * y + z * z);
  }
  return unit_bloch(x / n, y / n, z / n);
}

}  // namespace qabacus
