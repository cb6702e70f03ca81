// Serial reference kernels against their OpenMP versions. Each benchmark takes
// the problem size as its first argument and 0 (serial) or 1 (parallel) as its
// second.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "qabacus/kernels.hpp"

namespace k = qabacus::kernels;
using cplx = k::cplx;

namespace {

std::vector<double> nodes(std::size_t n) {
  std::vector<double> xs(n);
  const double h = 12.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) xs[j] = (static_cast<double>(j) + 0.5) * h;
  return xs;
}

std::vector<cplx> random_state(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& z : v) z = {g(rng), g(rng)};
  return v;
}

// 128 modes split evenly over the two sides, as in a Bloch basis.
k::ModeLayout layout(int modes) {
  k::ModeLayout l;
  for (int n = 0; n < modes; ++n) {
    l.side.push_back(n % 2);
    l.hermite.push_back(n);
    l.factor.push_back(std::sqrt(2.0));
  }
  return l;
}

constexpr int kModes = 128;

void BM_hermite_table(benchmark::State& state) {
  const auto xs = nodes(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(xs.size() * (kModes + 2));
  for (auto _ : state) {
    if (state.range(1)) {
      k::parallel::hermite_table(xs, 1.0, kModes + 2, out);
    } else {
      k::serial::hermite_table(xs, 1.0, kModes + 2, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_project(benchmark::State& state) {
  const auto xs = nodes(static_cast<std::size_t>(state.range(0)));
  std::vector<double> table(xs.size() * (kModes + 2));
  k::serial::hermite_table(xs, 1.0, kModes + 2, table);
  const auto lay = layout(kModes);
  const auto a = random_state(xs.size(), 1), b = random_state(xs.size(), 2);
  std::vector<cplx> out(kModes);
  for (auto _ : state) {
    if (state.range(1)) {
      k::parallel::project(table, xs.size(), lay, a, b, 0.01, out);
    } else {
      k::serial::project(table, xs.size(), lay, a, b, 0.01, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_synthesize(benchmark::State& state) {
  const auto xs = nodes(static_cast<std::size_t>(state.range(0)));
  std::vector<double> table(xs.size() * (kModes + 2));
  k::serial::hermite_table(xs, 1.0, kModes + 2, table);
  const auto lay = layout(kModes);
  const auto c = random_state(kModes, 3);
  std::vector<cplx> a(xs.size()), b(xs.size());
  for (auto _ : state) {
    if (state.range(1)) {
      k::parallel::synthesize(table, xs.size(), lay, c, a, b);
    } else {
      k::serial::synthesize(table, xs.size(), lay, c, a, b);
    }
    benchmark::DoNotOptimize(a.data());
  }
}

k::Tridiagonal laplacian(std::size_t n) {
  k::Tridiagonal t;
  const double h = 12.0 / static_cast<double>(n);
  t.diag.assign(n, 1.0 / (h * h));
  t.lower.assign(n, -0.5 / (h * h));
  t.upper.assign(n, -0.5 / (h * h));
  return t;
}

void BM_cn_rhs(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto h = laplacian(n);
  const auto psi = random_state(n, 4);
  std::vector<cplx> out(n);
  for (auto _ : state) {
    if (state.range(1)) {
      k::parallel::cn_rhs(h, 1e-3, psi, out);
    } else {
      k::serial::cn_rhs(h, 1e-3, psi, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_bisect_eigenvalues(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const double h = 12.0 / static_cast<double>(n);
  k::SturmMatrix m;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = (static_cast<double>(j) + 0.5) * h;
    m.diag.push_back(1.0 / (h * h) + 0.5 * x * x);
  }
  m.offdiag_sq.assign(n - 1, 0.25 / (h * h * h * h));
  for (auto _ : state) {
    auto e = state.range(1) ? k::parallel::bisect_eigenvalues(m, 0, 32, 1e-12)
                            : k::serial::bisect_eigenvalues(m, 0, 32, 1e-12);
    benchmark::DoNotOptimize(e.data());
  }
}

void sizes(benchmark::internal::Benchmark* b) {
  for (long n : {2048L, 8192L, 32768L})
    for (long p : {0L, 1L}) b->Args({n, p});
  b->ArgNames({"nodes", "parallel"});
}

}  // namespace

BENCHMARK(BM_hermite_table)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_project)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_synthesize)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_cn_rhs)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_bisect_eigenvalues)->Apply(sizes)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
