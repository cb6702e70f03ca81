#pragma once

// Small independent references used across the unit tests.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qabacus/su2.hpp"

namespace testing {

using qabacus::cplx;
using qabacus::Mat2;

inline Mat2 matmul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[2 * i + j] = a[2 * i] * b[j] + a[2 * i + 1] * b[2 + j];
  return c;
}

inline double max_diff(const Mat2& a, const Mat2& b) {
  double d = 0.0;
  for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

inline Mat2 dagger(const Mat2& a) { return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}; }

// Dense Gaussian elimination with partial pivoting.
inline std::vector<cplx> dense_solve(std::vector<std::vector<cplx>> a, std::vector<cplx> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    std::swap(a[k], a[p]);
    std::swap(b[k], b[p]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<cplx> x(n);
  for (std::size_t i = n; i-- > 0;) {
    cplx s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

// Decaying solution of -psi''/2 + x^2 psi/2 = E psi (hbar = m = omega = 1)
// integrated inward from x = 9 with RK4; returns (psi(0), psi'(0)).
inline std::pair<double, double> shoot_to_origin(double energy, double step = 1e-3) {
  double x = 9.0;
  double y = std::exp(-0.5 * x * x) * 1e30;
  double dy = -x * y;
  const auto f = [energy](double x, double y) { return (x * x - 2.0 * energy) * y; };
  const int n = static_cast<int>(std::lround(x / step));
  const double h = -x / n;
  for (int i = 0; i < n; ++i) {
    const double k1y = dy, k1d = f(x, y);
    const double k2y = dy + 0.5 * h * k1d, k2d = f(x + 0.5 * h, y + 0.5 * h * k1y);
    const double k3y = dy + 0.5 * h * k2d, k3d = f(x + 0.5 * h, y + 0.5 * h * k2y);
    const double k4y = dy + h * k3d, k4d = f(x + h, y + h * k3y);
    y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    dy += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
    x += h;
  }
  return {y, dy};
}

// Robin level by bisection on the sign of psi(0) + b psi'(0) in [lo, hi].
inline double shooting_level(double b, double lo, double hi) {
  const auto g = [b](double e) {
    const auto [y, dy] = shoot_to_origin(e);
    return y + b * dy;
  };
  double glo = g(lo);
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace testing
