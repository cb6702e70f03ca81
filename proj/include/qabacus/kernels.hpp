#pragma once

// Data-parallel inner loops. Every kernel has a serial reference version and
// an OpenMP version that produce bit-identical output: the parallel loops
// split over output elements, and each output is accumulated by one thread
// in the same order as the serial loop.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qabacus::kernels {

using cplx = std::complex<double>;

/// Which side (0 = plus, 1 = minus), Hermite index and prefactor each modal
/// index uses. Mode n is factor[n] * u_{hermite[n]} on component side[n]
/// (before the basis rotation).
struct ModeLayout {
  std::vector<int> side;
  std::vector<int> hermite;
  std::vector<double> factor;

  std::size_t size() const noexcept { return side.size(); }
};

/// Tridiagonal operator in unfolded (minus side reversed, then plus side)
/// node order. lower[k] couples k to k-1 (lower[0] unused), upper[k] couples
/// k to k+1 (upper[n-1] unused).
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<cplx> lower;
  std::vector<cplx> upper;

  std::size_t size() const noexcept { return diag.size(); }
};

/// Symmetric/Hermitian tridiagonal matrix stored as diagonal and squared
/// moduli of the off-diagonal, enough for Sturm counts.
struct SturmMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag_sq;  // size n-1
};

/// Number of eigenvalues strictly below `lambda`.
std::size_t sturm_count(const SturmMatrix& m, double lambda);

namespace serial {

/// out[n * xs.size() + j] = u_n(xs[j]) for n < rows, normalised Hermite
/// functions with oscillator length `length`.
void hermite_table(std::span<const double> xs, double length, int rows, std::span<double> out);

/// out[n] = weight * factor[n] * sum_j table[hermite[n]][j] * side_data[side[n]][j].
void project(std::span<const double> table, std::size_t nodes, const ModeLayout& layout,
             std::span<const cplx> side0, std::span<const cplx> side1, double weight,
             std::span<cplx> out);

/// side_s[j] = sum_{n on side s} coeffs[n] * factor[n] * table[hermite[n]][j].
void synthesize(std::span<const double> table, std::size_t nodes, const ModeLayout& layout,
                std::span<const cplx> coeffs, std::span<cplx> side0, std::span<cplx> side1);

/// out = (1 - i alpha H) psi.
void cn_rhs(const Tridiagonal& h, double alpha, std::span<const cplx> psi, std::span<cplx> out);

/// Eigenvalues with indices first .. first+count-1 (ascending) by bisection on
/// the Sturm count, to absolute tolerance `tol`.
std::vector<double> bisect_eigenvalues(const SturmMatrix& m, std::size_t first, std::size_t count,
                                       double tol);

}  // namespace serial

namespace parallel {

void hermite_table(std::span<const double> xs, double length, int rows, std::span<double> out);
void project(std::span<const double> table, std::size_t nodes, const ModeLayout& layout,
             std::span<const cplx> side0, std::span<const cplx> side1, double weight,
             std::span<cplx> out);
void synthesize(std::span<const double> table, std::size_t nodes, const ModeLayout& layout,
                std::span<const cplx> coeffs, std::span<cplx> side0, std::span<cplx> side1);
void cn_rhs(const Tridiagonal& h, double alpha, std::span<const cplx> psi, std::span<cplx> out);
std::vector<double> bisect_eigenvalues(const SturmMatrix& m, std::size_t first, std::size_t count,
                                       double tol);

}  // namespace parallel

/// Solves (1 + i alpha H) x = rhs with a factorisation computed once.
/// 1 + i alpha H has positive-definite Hermitian part, so elimination without
/// pivoting is stable.
class CrankNicolsonSolver {
 public:
  CrankNicolsonSolver(const Tridiagonal& h, double alpha);
  void solve(std::span<const cplx> rhs, std::span<cplx> x) const;

 private:
  std::vector<cplx> lower_;
  std::vector<cplx> upper_;
  std::vector<cplx> inv_pivot_;
};

/// u_n(x) for a single point, with running rescaling so that large n at
/// large |x| neither overflows nor underflows early.
double hermite_function(int n, double x, double length);

}  // namespace qabacus::kernels
