#pragma once

namespace qabacus {

/// Tolerances shared by every module. Change them here, nowhere else.
struct NumericPolicy {
  double algebraic = 1e-12;  // 2x2 matrix identities, unitarity, class tests
  double spectral = 1e-10;   // eigenvalue comparisons, modal norms
  double quadrature = 1e-8;  // grid norms and Gram matrices
  double residual = 1e-8;    // boundary-condition residuals
};

inline constexpr NumericPolicy kTolerance{};

}  // namespace qabacus
