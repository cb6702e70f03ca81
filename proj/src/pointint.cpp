#include "qabacus/pointint.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/tools/roots.hpp>

#include "qabacus/discretization.hpp"
#include "qabacus/kernels.hpp"

namespace qabacus {

Vec2 connection_residual(const PointInteraction& pi, const Vec2& psi0, const Vec2& dpsi0) {
  const Mat2 id = mat2::identity();
  const Mat2 a = mat2::add(pi.gate.matrix(), mat2::scale(-1.0, id));
  const Mat2 b = mat2::scale(kI * pi.interface_length, mat2::add(pi.gate.matrix(), id));
  const Vec2 x = mat2::apply(a, psi0);
  const Vec2 y = mat2::apply(b, dpsi0);
  return {x[0] + y[0], x[1] + y[1]};
}

namespace {

// Solves m z = rhs for a 2x2 system; false if numerically singular.
bool solve2(const Mat2& m, const Vec2& rhs, Vec2& z) {
  const cplx d = mat2::det(m);
  double scale = 0.0;
  for (const cplx& e : m) scale = std::max(scale, std::abs(e));
  if (std::abs(d) <= 1e-14 * scale * scale) return false;
  z = {(m[3] * rhs[0] - m[1] * rhs[1]) / d, (m[0] * rhs[1] - m[2] * rhs[0]) / d};
  return true;
}

}  // namespace

ScatteringAmplitudes scattering_amplitudes(const PointInteraction& pi, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("wavenumber must be positive");
  // Incident from the left: Psi(0) = (t, 1 + r), Psi'(0) = (ik t, ik (r - 1)).
  // Incident from the right: Psi(0) = (1 + r', t'), Psi'(0) = (ik (r' - 1), ik t').
  // Both reduce to (A + ik B) z = (ik B - A) e with A = U - I, B = i L0 (U + I).
  const Mat2 id = mat2::identity();
  const Mat2 a = mat2::add(pi.gate.matrix(), mat2::scale(-1.0, id));
  const Mat2 b = mat2::scale(kI * pi.interface_length, mat2::add(pi.gate.matrix(), id));
  const cplx ik = kI * k;
  const Mat2 m = mat2::add(a, mat2::scale(ik, b));
  const Mat2 drive = mat2::add(mat2::scale(ik, b), mat2::scale(-1.0, a));

  ScatteringAmplitudes out;
  out.k = k;
  Vec2 left, right;
  if (!solve2(m, {drive[1], drive[3]}, left) || !solve2(m, {drive[0], drive[2]}, right)) {
    out.t_lr = out.t_rl = 0.0;
    out.r_lr = out.r_rl = -1.0;
    return out;
  }
  out.t_lr = left[0];
  out.r_lr = left[1];
  out.r_rl = right[0];
  out.t_rl = right[1];
  return out;
}

std::string to_string(SpectrumMethod m) {
  switch (m) {
    case SpectrumMethod::exact: return "exact";
    case SpectrumMethod::analytic_gamma: return "analytic_gamma";
    case SpectrumMethod::finite_difference: return "finite_difference";
  }
  return "unknown";
}

namespace {

constexpr double kSpecialAngle = 1e-14;

std::string angle_label(double theta) {
  std::ostringstream os;
  os.precision(17);
  os << "theta=" << theta;
  return os.str();
}

// Decaying solution at E = (nu + 1/2) hbar omega is D_nu(sqrt2 x / l). With
// kappa = 2 L0 cot(theta/2) / l the boundary condition is
//   1/Gamma((1 - nu)/2) - kappa / Gamma(-nu/2) = 0.
// For nu > -1 it is multiplied by pi / Gamma((1 + nu)/2) (reflection formula):
//   G(nu) = cos(pi nu / 2) + kappa sin(pi nu / 2) Gamma(1 + nu/2) / Gamma((1 + nu)/2).
double gamma_ratio(double nu) { return std::exp(std::lgamma(1.0 + 0.5 * nu) - std::lgamma(0.5 * (1.0 + nu))); }

double boundary_function(double nu, double kappa) {
  return boost::math::cos_pi(0.5 * nu) + kappa * boost::math::sin_pi(0.5 * nu) * gamma_ratio(nu);
}

double relative_residual(double nu, double kappa) {
  if (nu < 0.0) {
    const double q = std::exp(std::lgamma(-0.5 * nu) - std::lgamma(0.5 * (1.0 - nu)));
    return std::abs(q - kappa) / (q + std::abs(kappa));
  }
  const double c = boost::math::cos_pi(0.5 * nu);
  const double s = kappa * boost::math::sin_pi(0.5 * nu) * gamma_ratio(nu);
  return std::abs(c + s) / (std::abs(c) + std::abs(s));
}

double root_in(double lo, double hi, double kappa) {
  boost::uintmax_t iters = 200;
  const auto f = [kappa](double nu) { return boundary_function(nu, kappa); };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (a + b);
}

// kappa > 0: the lowest level lies below the Neumann ground state, possibly
// far below zero energy. With s = -nu it solves
// ln Gamma(s/2) - ln Gamma((1 + s)/2) = ln kappa, monotone in s.
double ground_below_zero(double kappa) {
  const double target = std::log(kappa);
  const auto f = [target](double s) { return std::lgamma(0.5 * s) - std::lgamma(0.5 * (1.0 + s)) - target; };
  double lo = 1e-300;
  double hi = 1.0;
  while (f(hi) > 0.0) hi *= 2.0;
  boost::uintmax_t iters = 400;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return -0.5 * (a + b);
}

SpectrumResult ladder(int first, int count, const std::string& label) {
  SpectrumResult r;
  r.method = SpectrumMethod::exact;
  r.boundary = label;
  for (int j = 0; j < count; ++j) {
    r.levels.push_back(first + 2.0 * j + 0.5);
    r.residuals.push_back(0.0);
  }
  return r;
}

SpectrumResult merged(const SpectrumResult& a, const SpectrumResult& b, int count, SpectrumMethod method,
                      const std::string& label) {
  std::vector<std::pair<double, double>> all;
  for (std::size_t i = 0; i < a.levels.size(); ++i) all.emplace_back(a.levels[i], a.residuals[i]);
  for (std::size_t i = 0; i < b.levels.size(); ++i) all.emplace_back(b.levels[i], b.residuals[i]);
  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  SpectrumResult r;
  r.method = method;
  r.boundary = label;
  for (int i = 0; i < count && i < static_cast<int>(all.size()); ++i) {
    r.levels.push_back(all[i].first);
    r.residuals.push_back(all[i].second);
  }
  return r;
}

void require_count(int count) {
  if (count < 1) throw std::invalid_argument("level count must be at least 1");
}

}  // namespace

SpectrumResult robin_levels(double theta, const PhysicalConfig& cfg, int count) {
  require_count(count);
  cfg.validate();
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  if (t <= kSpecialAngle || 2.0 * kPi - t <= kSpecialAngle) return ladder(0, count, "neumann");
  if (std::abs(t - kPi) <= kSpecialAngle) return ladder(1, count, "dirichlet");

  const double kappa = 2.0 * cfg.interface_length / (std::tan(0.5 * t) * cfg.length());
  SpectrumResult r;
  r.method = SpectrumMethod::analytic_gamma;
  r.boundary = angle_label(t);
  for (int j = 0; j < count; ++j) {
    double nu;
    if (kappa < 0.0) {
      nu = root_in(2.0 * j, 2.0 * j + 1.0, kappa);
    } else if (j == 0) {
      nu = ground_below_zero(kappa);
    } else {
      nu = root_in(2.0 * j - 1.0, 2.0 * j, kappa);
    }
    r.levels.push_back(nu + 0.5);
    r.residuals.push_back(relative_residual(nu, kappa));
  }
  return r;
}

SpectrumResult spectrum(const PointInteraction& pi, const PhysicalConfig& cfg, int count) {
  require_count(count);
  PhysicalConfig c = cfg;
  c.interface_length = pi.interface_length;
  c.validate();
  const GateClass gc = pi.gate_class();
  switch (gc) {
    case GateClass::scale_invariant_bloch: {
      SpectrumResult r;
      r.method = SpectrumMethod::exact;
      r.boundary = to_string(gc);
      for (int n = 0; n < count; ++n) {
        r.levels.push_back(n + 0.5);
        r.residuals.push_back(0.0);
      }
      return r;
    }
    case GateClass::plus_identity:
      return merged(ladder(0, count, ""), ladder(0, count, ""), count, SpectrumMethod::exact, to_string(gc));
    case GateClass::minus_identity:
      return merged(ladder(1, count, ""), ladder(1, count, ""), count, SpectrumMethod::exact, to_string(gc));
    default: break;
  }
  const Diagonalization d = diagonalize(pi.gate);
  const SpectrumResult a = robin_levels(d.d.theta_plus, c, count);
  const SpectrumResult b = robin_levels(d.d.theta_minus, c, count);
  const SpectrumMethod method = a.method == SpectrumMethod::exact && b.method == SpectrumMethod::exact
                                    ? SpectrumMethod::exact
                                    : SpectrumMethod::analytic_gamma;
  return merged(a, b, count, method, a.boundary + "," + b.boundary);
}

Grid FdGrid::grid(const PhysicalConfig& cfg) const {
  if (nodes_per_length < 8 || !(lengths > 0.0)) throw std::invalid_argument("bad finite-difference grid");
  return Grid::make(lengths * cfg.length(), static_cast<std::size_t>(std::lround(lengths * nodes_per_length)));
}

namespace {

SpectrumResult fd_levels(const kernels::SturmMatrix& m, const PhysicalConfig& cfg, int count,
                         const std::string& label) {
  require_count(count);
  const double unit = cfg.energy_unit();
  const double tol = 1e-13 * unit * std::max(1.0, static_cast<double>(count));
  const std::vector<double> e = kernels::parallel::bisect_eigenvalues(m, 0, static_cast<std::size_t>(count), tol);
  SpectrumResult r;
  r.method = SpectrumMethod::finite_difference;
  r.boundary = label;
  for (double v : e) {
    r.levels.push_back(v / unit);
    r.residuals.push_back(tol / unit);
  }
  return r;
}

}  // namespace

SpectrumResult fd_oracle_levels(double theta, const PhysicalConfig& cfg, const FdGrid& fd, int count) {
  cfg.validate();
  return fd_levels(half_line_hamiltonian(theta, cfg, fd.grid(cfg)), cfg, count, angle_label(theta));
}

SpectrumResult fd_oracle_levels(const UnitaryGate& u, const PhysicalConfig& cfg, const FdGrid& fd, int count) {
  cfg.validate();
  return fd_levels(sturm_matrix(unfolded_hamiltonian(u, cfg, fd.grid(cfg))), cfg, count, to_string(classify(u)));
}

}  // namespace qabacus
