#include "qabacus/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qabacus::kernels {

namespace {

constexpr double kRescale = 1e100;
const double kLogRescale = std::log(kRescale);

// Fills out[n * stride] = u_n(x) for n < rows.
void hermite_column(double x, double length, int rows, double* out, std::size_t stride) {
  const double xi = x / length;
  double log_scale = -0.5 * xi * xi;
  double prev = 0.0;
  double cur = std::pow(M_PI, -0.25) / std::sqrt(length);
  for (int n = 0; n < rows; ++n) {
    if (n > 0) {
      const double next = std::sqrt(2.0 / n) * xi * cur - std::sqrt((n - 1.0) / n) * prev;
      prev = cur;
      cur = next;
      if (std::abs(cur) > kRescale) {
        cur /= kRescale;
        prev /= kRescale;
        log_scale += kLogRescale;
      }
    }
    out[n * stride] = cur * std::exp(log_scale);
  }
}

cplx project_one(std::span<const double> table, std::size_t nodes, const ModeLayout& layout,
                 std::span<const cplx> side0, std::span<const cplx> side1, double weight,
                 std::size_t n) {
  const double* row = table.data() + static_cast<std::size_t>(layout.hermite[n]) * nodes;
  const cplx* data = layout.side[n] == 0 ? side0.data() : side1.data();
  cplx acc = 0.0;
  for (std::size_t j = 0; j < nodes; ++j) acc += row[j] * data[j];
  return weight * layout.factor[n] * acc;
}

void synthesize_node(std::span<const double> table, std::size_t nodes, const ModeLayout& layout,
                     std::span<const cplx> coeffs, std::span<cplx> side0, std::span<cplx> side1,
                     std::size_t j) {
  cplx acc0 = 0.0;
  cplx acc1 = 0.0;
  for (std::size_t n = 0; n < layout.size(); ++n) {
    const cplx term = coeffs[n] * (layout.factor[n] * table[layout.hermite[n] * nodes + j]);
    if (layout.side[n] == 0) {
      acc0 += term;
    } else {
      acc1 += term;
    }
  }
  side0[j] = acc0;
  side1[j] = acc1;
}

cplx rhs_one(const Tridiagonal& h, double alpha, std::span<const cplx> psi, std::size_t k) {
  const std::size_t n = h.size();
  cplx hpsi = h.diag[k] * psi[k];
  if (k > 0) hpsi += h.lower[k] * psi[k - 1];
  if (k + 1 < n) hpsi += h.upper[k] * psi[k + 1];
  return psi[k] - cplx(0.0, alpha) * hpsi;
}

std::pair<double, double> gerschgorin(const SturmMatrix& m) {
  const std::size_t n = m.diag.size();
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::sqrt(m.offdiag_sq[i - 1]);
    if (i + 1 < n) r += std::sqrt(m.offdiag_sq[i]);
    lo = std::min(lo, m.diag[i] - r);
    hi = std::max(hi, m.diag[i] + r);
  }
  const double pad = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  return {lo - pad, hi + pad};
}

double bisect_one(const SturmMatrix& m, std::size_t index, double lo, double hi, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(m, mid) > index) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void check_table(std::span<const double> xs, int rows, std::span<double> out) {
  if (rows < 0 || out.size() < static_cast<std::size_t>(rows) * xs.size()) {
    throw std::invalid_argument("hermite table buffer too small");
  }
}

}  // namespace

std::size_t sturm_count(const SturmMatrix& m, double lambda) {
  const std::size_t n = m.diag.size();
  const double pivmin = std::numeric_limits<double>::min() * 1e10;
  std::size_t count = 0;
  double q = m.diag[0] - lambda;
  for (std::size_t i = 0;; ++i) {
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
    if (i + 1 == n) break;
    q = m.diag[i + 1] - lambda - m.offdiag_sq[i] / q;
  }
  return count;
}

double hermite_function(int n, double x, double length) {
  if (n < 0) throw std::invalid_argument("hermite index must be non-negative");
  std::vector<double> col(static_cast<std::size_t>(n) + 1);
  hermite_column(x, length, n + 1, col.data(), 1);
  return col.back();
}

namespace serial {

void hermite_table(std::span<const double> xs, double length, int rows, std::span<double> out) {
  check_table(xs, rows, out);
  for (std::size_t j = 0; j < xs.size(); ++j) hermite_column(xs[j], length, rows, out.data() + j, xs.size());
}

void project(std::span<const double> table, std::size_t nodes, const ModeLayout& layout,
             std::span<const cplx> side0, std::span<const cplx> side1, double weight,
             std::span<cplx> out) {
  for (std::size_t n = 0; n < layout.size(); ++n) out[n] = project_one(table, nodes, layout, side0, side1, weight, n);
}

void synthesize(std::span<const double> table, std::size_t nodes, const ModeLayout& layout,
                std::span<const cplx> coeffs, std::span<cplx> side0, std::span<cplx> side1) {
  for (std::size_t j = 0; j < nodes; ++j) synthesize_node(table, nodes, layout, coeffs, side0, side1, j);
}

void cn_rhs(const Tridiagonal& h, double alpha, std::span<const cplx> psi, std::span<cplx> out) {
  for (std::size_t k = 0; k < h.size(); ++k) out[k] = rhs_one(h, alpha, psi, k);
}

std::vector<double> bisect_eigenvalues(const SturmMatrix& m, std::size_t first, std::size_t count,
                                       double tol) {
  const auto [lo, hi] = gerschgorin(m);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = bisect_one(m, first + i, lo, hi, tol);
  return out;
}

}  // namespace serial

namespace parallel {

void hermite_table(std::span<const double> xs, double length, int rows, std::span<double> out) {
  check_table(xs, rows, out);
  const auto nodes = static_cast<std::ptrdiff_t>(xs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < nodes; ++j) hermite_column(xs[j], length, rows, out.data() + j, xs.size());
}

void project(std::span<const double> table, std::size_t nodes, const ModeLayout& layout,
             std::span<const cplx> side0, std::span<const cplx> side1, double weight,
             std::span<cplx> out) {
  const auto modes = static_cast<std::ptrdiff_t>(layout.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t n = 0; n < modes; ++n) out[n] = project_one(table, nodes, layout, side0, side1, weight, n);
}

void synthesize(std::span<const double> table, std::size_t nodes, const ModeLayout& layout,
                std::span<const cplx> coeffs, std::span<cplx> side0, std::span<cplx> side1) {
  const auto count = static_cast<std::ptrdiff_t>(nodes);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < count; ++j) synthesize_node(table, nodes, layout, coeffs, side0, side1, j);
}

void cn_rhs(const Tridiagonal& h, double alpha, std::span<const cplx> psi, std::span<cplx> out) {
  const auto n = static_cast<std::ptrdiff_t>(h.size());
#pragma omp parallel for schedule(static) if (n > 4096)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = rhs_one(h, alpha, psi, k);
}

std::vector<double> bisect_eigenvalues(const SturmMatrix& m, std::size_t first, std::size_t count,
                                       double tol) {
  const auto [lo, hi] = gerschgorin(m);
  std::vector<double> out(count);
  const auto c = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < c; ++i) out[i] = bisect_one(m, first + i, lo, hi, tol);
  return out;
}

}  // namespace parallel

CrankNicolsonSolver::CrankNicolsonSolver(const Tridiagonal& h, double alpha) {
  const std::size_t n = h.size();
  lower_.resize(n);
  upper_.resize(n);
  inv_pivot_.resize(n);
  const cplx ia(0.0, alpha);
  cplx prev_upper = 0.0;  // c'_{k-1}
  for (std::size_t k = 0; k < n; ++k) {
    const cplx a = 1.0 + ia * h.diag[k];
    const cplx b = k > 0 ? ia * h.lower[k] : cplx(0.0);
    const cplx c = k + 1 < n ? ia * h.upper[k] : cplx(0.0);
    const cplx pivot = a - b * prev_upper;
    inv_pivot_[k] = 1.0 / pivot;
    lower_[k] = b;
    upper_[k] = c * inv_pivot_[k];
    prev_upper = upper_[k];
  }
}

void CrankNicolsonSolver::solve(std::span<const cplx> rhs, std::span<cplx> x) const {
  const std::size_t n = inv_pivot_.size();
  x[0] = rhs[0] * inv_pivot_[0];
  for (std::size_t k = 1; k < n; ++k) x[k] = (rhs[k] - lower_[k] * x[k - 1]) * inv_pivot_[k];
  for (std::size_t k = n - 1; k-- > 0;) x[k] -= upper_[k] * x[k + 1];
}

}  // namespace qabacus::kernels
