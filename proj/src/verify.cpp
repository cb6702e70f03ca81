#include "qabacus/verify.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qabacus/abacus.hpp"
#include "qabacus/errors.hpp"
#include "qabacus/evolve.hpp"
#include "qabacus/pointint.hpp"

namespace qabacus {

namespace {

std::mt19937_64 criterion_rng(const VerifyOptions& o, int id) {
  std::seed_seq seq{static_cast<std::uint32_t>(o.seed), static_cast<std::uint32_t>(o.seed >> 32),
                    static_cast<std::uint32_t>(id)};
  return std::mt19937_64(seq);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

Grid default_grid(const VerifyOptions& o, const PhysicalConfig& cfg, std::size_t refine = 1) {
  return Grid::standard(cfg, o.x_max_lengths, o.grid_nodes * refine);
}

double default_dt(const VerifyOptions& o, const PhysicalConfig& cfg) {
  return o.dt > 0.0 ? o.dt : cfg.half_period() / 2000.0;
}

// A smooth two-component state: one Gaussian packet with a momentum kick per
// side, far enough from the origin that it vanishes there to ~1e-11.
struct Packets {
  struct Side {
    cplx amplitude;
    double center, width, k;
  };
  Side plus, minus;

  static Packets sample(std::mt19937_64& rng, const PhysicalConfig& cfg) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> center(4.0, 4.5), width(0.5, 0.55), k(-1.5, 1.5);
    const double l = cfg.length();
    const auto side = [&] { return Side{{g(rng), g(rng)}, center(rng) * l, width(rng) * l, k(rng) / l}; };
    Packets p{side(), side()};
    return p;
  }

  GridState on(const Grid& grid) const {
    const auto eval = [](const Side& s, double x) {
      const double d = (x - s.center) / s.width;
      return s.amplitude * std::exp(-0.5 * d * d) * std::exp(kI * s.k * x);
    };
    GridState st = GridState::sample(grid, [&](double x) { return Vec2{eval(plus, x), eval(minus, x)}; });
    st.normalize();
    return st;
  }
};

int thread_cap(const VerifyOptions& o) {
  if (o.threads > 0) return o.threads;
  if (const char* env = std::getenv("ABACUS_NUM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

double max_level_error(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

// 1. grid engine over tau vs -iU pointwise; refinement improves; modal exact.
CriterionResult half_period_identity(const VerifyOptions& o) {
  CriterionResult r{1, "half-period identity"};
  const PhysicalConfig cfg;
  auto rng = criterion_rng(o, 1);
  std::vector<UnitaryGate> gates;
  for (int i = 0; i < 20; ++i) gates.push_back(bloch_matrix(sample_bloch(rng)));
  std::vector<Packets> packets;
  for (int i = 0; i < 5; ++i) packets.push_back(Packets::sample(rng, cfg));

  std::vector<std::pair<int, int>> pairs;
  if (o.level == VerifyLevel::full) {
    for (int g = 0; g < 20; ++g)
      for (int p = 0; p < 5; ++p) pairs.emplace_back(g, p);
  } else {
    for (int g = 0; g < 4; ++g) pairs.emplace_back(g, g % 5);
  }

  const Grid coarse = default_grid(o, cfg), fine = default_grid(o, cfg, 2);
  const double dt = default_dt(o, cfg);
  const double tau = cfg.half_period();
  struct PairResult {
    double coarse, fine, modal;
  };
  std::vector<PairResult> res(pairs.size());
  const int n = static_cast<int>(pairs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_cap(o))
  for (int i = 0; i < n; ++i) {
    const auto [gi, pi] = pairs[i];
    const UnitaryGate& u = gates[gi];
    const Mat2 target = half_period_map(u);
    const GridState s = packets[pi].on(coarse);
    res[i].coarse = fidelity(s.transformed(target), evolve_grid_cn({u}, s, {}, dt, tau, cfg).state);
    const GridState sf = packets[pi].on(fine);
    res[i].fine = fidelity(sf.transformed(target), evolve_grid_cn({u}, sf, {}, 0.5 * dt, tau, cfg).state);

    const ModalBasis basis(u);
    const HermiteTable table(coarse, cfg.length(), basis.max_hermite(kDefaultModes) + 1);
    const Projection p = project(s, basis, table, kDefaultModes);
    const GridState modal = synthesize(evolve_modal(p.state, tau, cfg), basis, table);
    res[i].modal = l2_distance(modal, s.transformed(target));
  }
  double min_fid = 1.0, worst_modal = 0.0;
  int non_monotone = 0;
  for (const PairResult& p : res) {
    min_fid = std::min(min_fid, p.coarse);
    worst_modal = std::max(worst_modal, p.modal);
    if (1.0 - p.fine > (1.0 - p.coarse) + 1e-12) ++non_monotone;
  }
  r.pass = min_fid >= 0.999 && non_monotone == 0 && worst_modal <= 1e-10;
  r.measured = std::to_string(pairs.size()) + " pairs, min grid fidelity " + fmt(min_fid) + " (1 - F = " + fmt(1.0 - min_fid) + ")" +
               ", refinement regressions " + std::to_string(non_monotone) + ", modal L2 " + fmt(worst_modal);
  return r;
}

// 2. (n + 1/2) ladder on the scale-invariant family, confirmed by the fd oracle.
CriterionResult spectrum_ladder(const VerifyOptions& o) {
  CriterionResult r{2, "spectrum ladder"};
  const PhysicalConfig cfg;
  auto rng = criterion_rng(o, 2);
  std::vector<UnitaryGate> gates{UnitaryGate::sigma(1), UnitaryGate::sigma(3), UnitaryGate::hadamard()};
  for (int i = 0; i < 3; ++i) gates.push_back(bloch_matrix(sample_bloch(rng)));
  std::vector<double> ladder;
  for (int n = 0; n < 8; ++n) ladder.push_back(n + 0.5);
  bool exact = true;
  double worst_fd = 0.0;
  for (const UnitaryGate& u : gates) {
    exact = exact && spectrum({u}, cfg, 8).levels == ladder;
    worst_fd = std::max(worst_fd, max_level_error(fd_oracle_levels(u, cfg, {12.0, 256}, 8).levels, ladder));
  }
  r.pass = exact && worst_fd <= 1e-4;
  r.measured = std::string("exact ladder ") + (exact ? "yes" : "no") + ", fd max error " + fmt(worst_fd);
  return r;
}

// 3. spectrum(V U V^-1) = spectrum(U) for separating diagonal U.
CriterionResult isospectrality(const VerifyOptions& o) {
  CriterionResult r{3, "isospectrality"};
  const PhysicalConfig cfg;
  auto rng = criterion_rng(o, 3);
  // |L0 cot(theta/2)| >= l/2 keeps both Robin problems away from the
  // near-Dirichlet corner, where the fd oracle converges slowly.
  const double limit = 2.0 * std::atan(2.0 * cfg.interface_length / cfg.length());
  std::uniform_real_distribution<double> angle(-limit, limit);
  double worst_analytic = 0.0, worst_fd = 0.0;
  for (int i = 0; i < 5; ++i) {
    double a = angle(rng), b = angle(rng);
    while (std::abs(a - b) < 0.1) b = angle(rng);
    const UnitaryGate u(DiagonalGate{a, b}.matrix());
    const UnitaryGate v = sample_unitary(rng);
    const UnitaryGate w = conjugate(u, v);
    const std::vector<double> ref = spectrum({u}, cfg, 8).levels;
    worst_analytic = std::max(worst_analytic, max_level_error(spectrum({w}, cfg, 8).levels, ref));
    worst_fd = std::max(worst_fd, max_level_error(fd_oracle_levels(w, cfg, {12.0, 256}, 8).levels, ref));
  }
  r.pass = worst_analytic <= 1e-4 && worst_fd <= 1e-4;
  r.measured = "analytic " + fmt(worst_analytic) + ", fd " + fmt(worst_fd);
  return r;
}

double s_matrix_defect(const ScatteringAmplitudes& a) {
  return mat2::unitarity_defect(Mat2{a.r_lr, a.t_rl, a.t_lr, a.r_rl});
}

// 4. Hadamard |t|^2 = 1/2 for all k; scattering unitarity.
CriterionResult hadamard_transmission(const VerifyOptions& o) {
  CriterionResult r{4, "Hadamard transmission"};
  auto rng = criterion_rng(o, 4);
  std::vector<double> ks;
  for (int i = 0; i < 50; ++i) ks.push_back(std::pow(10.0, -2.0 + 4.0 * i / 49.0));
  double worst_t = 0.0;
  for (double k : ks) {
    const ScatteringAmplitudes a = scattering_amplitudes({UnitaryGate::hadamard()}, k);
    worst_t = std::max({worst_t, std::abs(std::norm(a.t_lr) - 0.5), std::abs(std::norm(a.t_rl) - 0.5)});
  }
  std::vector<UnitaryGate> gates{UnitaryGate::hadamard(), UnitaryGate::sigma(1), UnitaryGate::sigma(3),
                                 UnitaryGate::identity(), UnitaryGate::minus_identity()};
  for (int i = 0; i < 10; ++i) gates.push_back(sample_unitary(rng));
  for (int i = 0; i < 5; ++i) gates.push_back(bloch_matrix(sample_bloch(rng)));
  double worst_u = 0.0;
  for (const UnitaryGate& u : gates)
    for (double k : ks) worst_u = std::max(worst_u, s_matrix_defect(scattering_amplitudes({u}, k)));
  r.pass = worst_t <= 1e-12 && worst_u < 1e-12;
  r.measured = "| |t|^2 - 1/2 | " + fmt(worst_t) + ", unitarity " + fmt(worst_u) + " over " +
               std::to_string(gates.size()) + " gates";
  return r;
}

// 5. decomposition into <= 4 Bloch steps; compiled schedules on the modal engine.
CriterionResult gate_compiler(const VerifyOptions& o) {
  CriterionResult r{5, "gate compiler"};
  const PhysicalConfig cfg;
  auto rng = criterion_rng(o, 5);
  const Grid grid = Grid::standard(cfg);
  const std::vector<double> f = make_profile({}, grid, cfg);
  const int runs = o.level == VerifyLevel::full ? 1000 : 200;
  std::normal_distribution<double> g;
  std::size_t max_steps = 0;
  bool only_bloch = true;
  double worst_rec = 0.0, worst_amp = 0.0;
  EngineOptions engine;
  for (int i = 0; i < 1000; ++i) {
    const UnitaryGate u = sample_unitary(rng);
    const GateDecomposition d = decompose_gate(u);
    max_steps = std::max(max_steps, d.steps.size());
    for (const GateStep& s : d.steps) only_bloch = only_bloch && s.kind == GateStep::Kind::bloch;
    worst_rec = std::max(worst_rec, mat2::max_abs_diff(d.product(), u.matrix()));
    const cplx alpha{g(rng), g(rng)}, beta{g(rng), g(rng)};
    if (i >= runs) continue;
    const QubitState q = prepare_superposition(f, grid, alpha, beta);
    const auto in = amplitudes(q);
    const Schedule s = compile_gate(u, cfg);
    const auto out = amplitudes(apply_schedule(q, s, engine).qubit);
    const Vec2 expect = mat2::apply(mat2::scale(s.phase_offset, u.matrix()), {in[0], in[1]});
    worst_amp = std::max({worst_amp, std::abs(out[0] - expect[0]), std::abs(out[1] - expect[1])});
  }
  r.pass = max_steps <= 4 && only_bloch && worst_rec <= 1e-12 && worst_amp <= 1e-8;
  r.measured = "max steps " + std::to_string(max_steps) + (only_bloch ? "" : " (non-Bloch step!)") +
               ", reconstruction " + fmt(worst_rec) + ", " + std::to_string(runs) + " executions, amplitude error " +
               fmt(worst_amp);
  return r;
}

// 6. Robin ladders at theta = 0, pi; theta = pi/2 against the fd oracle with
// second-order convergence.
CriterionResult robin_solver(const VerifyOptions&) {
  CriterionResult r{6, "Robin solver"};
  const PhysicalConfig cfg;
  std::vector<double> even, odd;
  for (int j = 0; j < 8; ++j) {
    even.push_back(2.0 * j + 0.5);
    odd.push_back(2.0 * j + 1.5);
  }
  const bool ladders = robin_levels(0.0, cfg, 8).levels == even && robin_levels(kPi, cfg, 8).levels == odd;
  const SpectrumResult exact = robin_levels(0.5 * kPi, cfg, 8);
  const double e1 = max_level_error(fd_oracle_levels(0.5 * kPi, cfg, {12.0, 256}, 8).levels, exact.levels);
  const double e2 = max_level_error(fd_oracle_levels(0.5 * kPi, cfg, {12.0, 512}, 8).levels, exact.levels);
  const double ratio = e1 / e2;
  double residual = 0.0;
  for (double x : exact.residuals) residual = std::max(residual, x);
  r.pass = ladders && e2 <= 1e-4 && ratio >= 3.6 && ratio <= 4.4 && residual <= 1e-10;
  r.measured = std::string("ladders ") + (ladders ? "exact" : "wrong") + ", fd error " + fmt(e1) + " -> " + fmt(e2) +
               " (ratio " + fmt(ratio) + "), root residual " + fmt(residual);
  return r;
}

// 7. NOT, closed, double NOT and Hadamard moves on |0> in both engines.
CriterionResult abacus_semantics(const VerifyOptions& o) {
  CriterionResult r{7, "abacus semantics"};
  const PhysicalConfig cfg;
  struct Case {
    const char* name;
    std::vector<UnitaryGate> gates;
    double p0;
  };
  const std::vector<Case> cases{{"NOT", {UnitaryGate::sigma(1)}, 0.0},
                                {"closed", {UnitaryGate::minus_identity()}, 1.0},
                                {"double NOT", {UnitaryGate::sigma(1), UnitaryGate::sigma(1)}, 1.0},
                                {"Hadamard", {UnitaryGate::hadamard()}, 0.5}};
  double worst_grid = 0.0, worst_modal = 0.0, double_not_fidelity = 0.0;
  for (Engine e : {Engine::modal, Engine::grid}) {
    const Grid grid = e == Engine::grid ? default_grid(o, cfg) : Grid::standard(cfg);
    const QubitState q = prepare(ProfileSpec{}, grid, cfg, 0);
    EngineOptions opt;
    opt.engine = e;
    opt.dt = o.dt;
    for (const Case& c : cases) {
      Schedule s{cfg};
      for (const UnitaryGate& u : c.gates) s.steps.push_back(Step::gate(u));
      const Readout ro = readout(apply_schedule(q, s, opt).qubit);
      const double err = std::max(std::abs(ro.p0 - c.p0), std::abs(ro.p1 - (1.0 - c.p0)));
      (e == Engine::grid ? worst_grid : worst_modal) = std::max(e == Engine::grid ? worst_grid : worst_modal, err);
      if (e == Engine::grid && c.gates.size() == 2) double_not_fidelity = ro.fidelity0;
    }
  }
  r.pass = worst_grid <= 2e-3 && worst_modal <= 1e-8 && double_not_fidelity >= 0.999;
  r.measured = "population error grid " + fmt(worst_grid) + ", modal " + fmt(worst_modal) +
               ", double-NOT profile fidelity " + fmt(double_not_fidelity);
  return r;
}

// 8. trigger CNOT truth table; superposed control rejected.
CriterionResult cnot_truth_table(const VerifyOptions& o) {
  CriterionResult r{8, "CNOT truth table"};
  const PhysicalConfig cfg;
  double worst = 1.0;
  bool table = true, rejected = false;
  for (Engine e : {Engine::modal, Engine::grid}) {
    const Grid grid = e == Engine::grid ? default_grid(o, cfg) : Grid::standard(cfg);
    const std::vector<double> f = make_profile({}, grid, cfg);
    EngineOptions opt;
    opt.engine = e;
    opt.dt = o.dt;
    for (int c = 0; c < 2; ++c) {
      for (int t = 0; t < 2; ++t) {
        const CnotResult out = cnot_trigger(prepare(f, grid, c), prepare(f, grid, t), cfg, opt);
        const Readout rc = readout(out.control), rt = readout(out.target);
        const int expect_t = c == 0 ? 1 - t : t;
        table = table && rc.bit() == c && rt.bit() == expect_t && out.applied == (c == 0);
        worst = std::min({worst, rc.confidence(), rt.confidence()});
      }
    }
    try {
      cnot_trigger(prepare_superposition(f, grid, 1.0, 1.0), prepare(f, grid, 0), cfg, opt);
    } catch (const ContractError&) {
      rejected = true;
    }
  }
  r.pass = table && worst >= 0.999 && rejected;
  r.measured = std::string("truth table ") + (table ? "matches" : "WRONG") + ", min side population " + fmt(worst) +
               ", superposed control " + (rejected ? "rejected" : "accepted");
  return r;
}

// 9. evolve(V U V^-1, V Psi, t) = V evolve(U, Psi, t).
CriterionResult conjugation_covariance(const VerifyOptions& o) {
  CriterionResult r{9, "conjugation covariance"};
  const PhysicalConfig cfg;
  auto rng = criterion_rng(o, 9);
  const Grid grid = Grid::standard(cfg);
  std::uniform_real_distribution<double> time(0.0, 2.0 * cfg.half_period());
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const UnitaryGate u = bloch_matrix(sample_bloch(rng));
    const UnitaryGate v = sample_unitary(rng);
    const GridState s = Packets::sample(rng, cfg).on(grid);
    const double t = time(rng);
    const GridState lhs = evolve_modal(conjugate(u, v), s.transformed(v.matrix()), t, cfg);
    const GridState rhs = evolve_modal(u, s, t, cfg).transformed(v.matrix());
    worst = std::max(worst, l2_distance(lhs, rhs));
  }
  r.pass = worst <= 1e-9;
  r.measured = "max L2 " + fmt(worst) + " over 10 tuples";
  return r;
}


}  // namespace

CriterionResult check_criterion(int id, const VerifyOptions& options) {
  using Check = CriterionResult (*)(const VerifyOptions&);
  static const Check checks[kCriterionCount] = {half_period_identity, spectrum_ladder,  isospectrality,
                                                hadamard_transmission, gate_compiler,   robin_solver,
                                                abacus_semantics,      cnot_truth_table, conjugation_covariance};
  if (id < 1 || id > kCriterionCount) throw std::out_of_range("criterion id must be in 1..9");
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = checks[id - 1](options);
  } catch (const std::exception& e) {
    static const char* names[kCriterionCount] = {
        "half-period identity", "spectrum ladder", "isospectrality", "Hadamard transmission", "gate compiler",
        "Robin solver", "abacus semantics", "CNOT truth table", "conjugation covariance"};
    r.id = id;
    r.name = names[id - 1];
    r.pass = false;
    r.measured = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_verification(const VerifyOptions& options, std::vector<int> ids) {
  if (ids.empty())
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  for (int id : ids)
    if (id < 1 || id > kCriterionCount) throw std::out_of_range("criterion id must be in 1..9");
  std::vector<CriterionResult> out(ids.size());
  // Criterion 1 parallelises over its own runs; kernels below that stay serial.
  omp_set_max_active_levels(2);
  const int n = static_cast<int>(ids.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::min(thread_cap(options), std::max(n, 1)))
  for (int i = 0; i < n; ++i) out[i] = check_criterion(ids[i], options);
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << " (" << r.name << "): " << r.measured << "  ["
     << fmt(r.seconds) << " s]";
  return os.str();
}

}  // namespace qabacus
