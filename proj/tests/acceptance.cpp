// Acceptance report: one PASS/FAIL line per criterion, tolerances and
// runtime budgets fixed below. Exits non-zero on any unexpected failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "corona/catalog.hpp"
#include "corona/cli.hpp"
#include "corona/fourier.hpp"
#include "corona/spectra.hpp"

using namespace corona;

namespace {

using GroupPtr = std::shared_ptr<const GroupSpec>;
using Sparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
constexpr double kPi = std::numbers::pi;

struct Result {
  bool pass;
  std::string detail;
};

GroupPtr z1() { return std::make_shared<const GroupSpec>(GroupSpec::lattice(1)); }
GroupPtr finite(const std::string& name) { return std::make_shared<const GroupSpec>(GroupSpec::finite(catalog::by_name(name))); }

Profile hop(const GroupSpec& g) { return {{g.make({1}), 1.0}, {g.make({-1}), 1.0}}; }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

CoefficientSymbol random_coefficient(const GroupSpec& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> kind(0, g.lattice_rank() ? 6 : 2);
  const auto window = g.enumerate_window(3);
  std::uniform_int_distribution<std::size_t> site(0, window.size() - 1);
  auto c = [&] { return cplx(u(rng), u(rng)); };
  switch (kind(rng)) {
    case 0: return constant(c());
    case 1: return vanishing(g, {{window[site(rng)], c()}, {window[site(rng)], c()}});
    case 2: {
      std::uniform_int_distribution<int> per(1, 3);
      std::vector<std::int64_t> period(g.lattice_rank());
      std::int64_t cells = 1;
      for (auto& p : period) cells *= (p = per(rng));
      std::vector<cplx> values(static_cast<std::size_t>(cells * g.finite_order()));
      for (auto& v : values) v = c();
      return periodic(g, period, values);
    }
    case 3: return scale(g, c(), slowly_oscillating(g, SoGenerator::SinSqrt, 0, 1.0 + 3 * std::abs(u(rng))));
    case 4: return sum(g, {constant(c()), slowly_oscillating(g, SoGenerator::Arctan, 0)});
    case 5: return vanishing_decay(c(), 0.5);
    default:
      return product(g, {slowly_oscillating(g, SoGenerator::Tanh, 0), random_coefficient(g, rng)});
  }
}

KernelSymbol random_kernel(const GroupPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> terms(1, 3);
  const auto support = g->enumerate_window(3);
  std::uniform_int_distribution<std::size_t> site(0, support.size() - 1);
  std::vector<KernelTerm> out;
  for (int t = terms(rng); t > 0; --t) {
    Profile p;
    for (int k = 0; k < 3; ++k) p[support[site(rng)]] += cplx(u(rng), u(rng));
    out.push_back({random_coefficient(*g, rng), p});
  }
  return normalize(KernelSymbol(g, out));
}

Sparse restrict_to_interior(const OperatorMatrix& m, const Sparse& full) {
  std::vector<int> pos(m.window.size(), -1);
  for (std::size_t i = 0; i < m.interior.size(); ++i) pos[m.interior[i]] = static_cast<int>(i);
  std::vector<Eigen::Triplet<cplx>> t;
  for (int i : m.interior)
    for (Sparse::InnerIterator it(full, i); it; ++it)
      if (pos[it.col()] >= 0) t.emplace_back(pos[i], pos[it.col()], it.value());
  Sparse out(static_cast<Eigen::Index>(m.interior.size()), static_cast<Eigen::Index>(m.interior.size()));
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

double max_entry(const Sparse& m) {
  double worst = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (Sparse::InnerIterator it(m, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

// 1. Sch is a *-homomorphism on interior windows.
Result criterion1() {
  std::mt19937_64 rng(20240601);
  double worst_prod = 0.0, worst_inv = 0.0;
  int kernels = 0;
  for (const auto& g : {z1(), finite("S3"), finite("D4"), finite("Q8")}) {
    const std::int64_t window = g->lattice_rank() ? 20 : 0, margin = g->lattice_rank() ? 6 : 0;
    for (int trial = 0; trial < 50; ++trial, ++kernels) {
      const auto phi = random_kernel(g, rng), psi = random_kernel(g, rng);
      const auto a = schrodinger_matrix(phi, window, margin);
      const auto b = schrodinger_matrix(psi, window, margin);
      const auto ab = schrodinger_matrix(diamond(phi, psi), window, margin);
      const auto as = schrodinger_matrix(involution(phi), window, margin);
      const Sparse prod = a.entries * b.entries;
      worst_prod = std::max(worst_prod, max_entry(Sparse(ab.interior_sparse() - restrict_to_interior(a, prod))));
      worst_inv = std::max(worst_inv, max_entry(Sparse(as.interior_sparse() - Sparse(a.interior_sparse().adjoint()))));
    }
  }
  return {worst_prod < 1e-10 && worst_inv < 1e-10,
          std::to_string(kernels) + " kernel pairs; product residual " + num(worst_prod) + ", involution residual " +
              num(worst_inv) + " (tol 1e-10)"};
}

// 2. Plancherel on every catalog finite group.
Result criterion2() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (const auto& name : catalog::names()) {
    const auto g = GroupSpec::finite(catalog::by_name(name));
    const auto dual = dual_of(g);
    for (int t = 0; t < 100; ++t) {
      Profile f;
      double norm2 = 0.0;
      for (const auto& x : g.enumerate_window(0)) {
        const cplx v(u(rng), u(rng));
        f[x] = v;
        norm2 += std::norm(v);
      }
      worst = std::max(worst, std::abs(norm2 - plancherel_norm(dual, fourier(g, dual, f))));
    }
  }
  return {worst < 1e-10, std::to_string(catalog::names().size()) + " groups x 100 functions; max residual " + num(worst) +
                             " (tol 1e-10)"};
}

// 3. Op o partial Fourier = Sch.
Result criterion3() {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  std::vector<std::pair<GroupPtr, std::int64_t>> cases = {{z1(), 200}};
  for (const auto& name : catalog::names()) cases.push_back({finite(name), 0});
  for (const auto& [g, window] : cases) {
    const auto dual = dual_of(*g);
    for (int t = 0; t < 3; ++t) {
      const auto phi = random_kernel(g, rng);
      const auto margin = phi.support_radius();
      const auto op = op_quantize(partial_fourier(phi, dual), dual, window, margin);
      const auto sch = schrodinger_matrix(phi, window, margin);
      worst = std::max(worst, max_entry(Sparse(op.interior_sparse() - sch.interior_sparse())));
    }
  }
  return {worst < 1e-10, "Z window 200 and " + std::to_string(catalog::names().size()) +
                             " finite groups; max entry residual " + num(worst) + " (tol 1e-10)"};
}

// 4. Symbol range of the discrete Laplacian.
Result criterion4() {
  const auto g = GroupSpec::lattice(1);
  const auto s = conv_symbol_range(hop(g), g, 4096);
  const double bound = 2 * kPi * 2.0 / 4096;
  const double d_interval = hausdorff_distance(s, SpectralSet::interval(-2.0, 2.0));
  // Circulant oracle: eigenvalues of the N-cycle adjacency are its DFT.
  const int n = 4096;
  std::vector<double> eig;
  for (int k = 0; k < n; ++k) eig.push_back((std::polar(1.0, -2 * kPi * k / n) + std::polar(1.0, 2 * kPi * k / n)).real());
  std::sort(eig.begin(), eig.end());
  double gap = 0.0;
  for (std::size_t i = 0; i + 1 < eig.size(); ++i) gap = std::max(gap, eig[i + 1] - eig[i]);
  SpectralSet circ;
  for (double e : eig) circ.points.push_back(e);
  circ.resolution = gap / 2;
  const double d_circ = hausdorff_distance(s, circ);
  const bool ok = s.resolution <= bound + 1e-15 && d_interval <= s.resolution && d_circ <= s.resolution + circ.resolution;
  return {ok, "resolution " + num(s.resolution) + " <= " + num(bound) + "; d_H to [-2,2] " + num(d_interval) +
                  "; d_H to circulant N=4096 " + num(d_circ) + " <= " + num(s.resolution + circ.resolution)};
}

KernelSymbol scaling_kernel(const GroupPtr& g) {
  return make_kernel(g, sum(*g, {constant(2.0), slowly_oscillating(*g, SoGenerator::SinSqrt, 0)}), hop(*g));
}

KernelSymbol sum_kernel(const GroupPtr& g) {
  return add(make_kernel(g, constant(1.0), hop(*g)),
             make_kernel(g, slowly_oscillating(*g, SoGenerator::Arctan, 0), delta(g->identity())));
}

// 5. Scaling formula.
Result criterion5() {
  const auto g = z1();
  const auto k = scaling_kernel(g);
  const auto ess = essential_spectrum(k);
  const auto cluster = cluster_range(*g, sum(*g, {constant(2.0), slowly_oscillating(*g, SoGenerator::SinSqrt, 0)}));
  const auto conv = conv_symbol_range(hop(*g), *g, 4096);
  const auto formula = set_product(cluster, conv);
  const double d = hausdorff_distance(ess.set, formula);
  const double budget = ess.set.resolution + formula.resolution;
  const double d_exact = hausdorff_distance(ess.set, SpectralSet::interval(-6, 6));
  return {d <= budget && d_exact <= ess.set.resolution,
          std::to_string(ess.provenance.size()) + " probes; d_H(union, formula) " + num(d) + " <= summed resolutions " +
              num(budget) + "; d_H to [-6,6] " + num(d_exact)};
}

// 6. Sum formula.
Result criterion6() {
  const auto g = z1();
  const auto k = sum_kernel(g);
  const auto ess = essential_spectrum(k);
  const auto formula = set_minkowski_sum(conv_symbol_range(hop(*g), *g, 4096),
                                         cluster_range(*g, slowly_oscillating(*g, SoGenerator::Arctan, 0)));
  const auto expected = set_union(SpectralSet::interval(-2 - kPi / 2, 2 - kPi / 2), SpectralSet::interval(-2 + kPi / 2, 2 + kPi / 2));
  const double d = hausdorff_distance(ess.set, formula);
  const double d_exact = hausdorff_distance(ess.set, expected);
  return {ess.provenance.size() == 2 && d <= 5e-3 && d_exact <= ess.set.resolution,
          std::to_string(ess.provenance.size()) + " probes; d_H(union, Minkowski) " + num(d) + " <= 5e-3; d_H to closed form " +
              num(d_exact) + " <= resolution " + num(ess.set.resolution)};
}

// 7. Truncation witness at N = 2000.
Result criterion7() {
  const auto g = z1();
  const auto scaling = scaling_kernel(g);
  // The scaling operator a (S + S*) is not self-adjoint; its real part has the same essential spectrum.
  const auto scaling_sa = scale(add(scaling, involution(scaling)), 0.5);
  std::string detail;
  bool ok = true;
  for (const auto& [name, k] : std::vector<std::pair<std::string, KernelSymbol>>{{"scaling", scaling_sa}, {"sum", sum_kernel(g)}}) {
    const auto r = truncation_crosscheck(k, 2000, 1e-3);
    ok = ok && r.decisive && r.contained;
    detail += name + ": " + (r.decisive ? "decisive" : "advisory") + ", sup dist " + num(r.containment_distance) +
              " (tol 1e-3), " + std::to_string(r.outliers.size()) + " outliers listed; ";
  }
  return {ok, detail + "finite-section caveat applies"};
}

// 8. Compact perturbation.
Result criterion8() {
  const auto g = z1();
  const auto base = make_kernel(g, constant(1.0), hop(*g));
  const auto pert = add(base, make_kernel(g, vanishing(*g, {{g->identity(), 10.0}}), delta(g->identity())));
  const double d = hausdorff_distance(essential_spectrum(base).set, essential_spectrum(pert).set);
  const auto e0 = eig_dense(schrodinger_matrix(base, 200, 1));
  const auto e1 = eig_dense(schrodinger_matrix(pert, 200, 1));
  double moved = 0.0;
  for (std::size_t i = 0; i < e0.size(); ++i) moved = std::max(moved, std::abs(e0[i] - e1[i]));
  return {d == 0.0 && moved >= 1.0, "d_H(sp_ess) " + num(d) + " (must be 0); largest truncation eigenvalue shift " +
                                        num(moved) + " (must be >= 1)"};
}

// 9. Fredholm certificates.
Result criterion9() {
  const auto g = z1();
  const auto id = is_fredholm(make_kernel(g, constant(1.0), delta(g->identity()))).verdict;
  const auto lap = is_fredholm(make_kernel(g, constant(1.0), hop(*g))).verdict;
  const auto shifted =
      is_fredholm(make_kernel(g, sum(*g, {constant(2.0), slowly_oscillating(*g, SoGenerator::SinSqrt, 0)}), {{g->make({1}), 1.0}}))
          .verdict;
  // 0 sits 1e-3 from the range [0.001, 4.001], inside the resolution 3.07e-3.
  const auto dir = std::filesystem::current_path() / "acceptance_scratch";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "inconclusive.json")
      << R"({"group": {"lattice": 1}, "kernel": [{"coeff": 1, "profile": [{"element": 1, "re": 1}, {"element": -1, "re": 1}, {"element": 0, "re": 2.001}]}]})";
  cli::RunRequest req{"fredholm", (dir / "inconclusive.json").string(), {}, {}, {}, {}, (dir / "out").string()};
  std::ostringstream out, err;
  const int code = cli::run(req, out, err);
  const bool ok = id == Verdict::Fredholm && lap == Verdict::NotFredholm && shifted == Verdict::Fredholm && code == 2;
  return {ok, "identity " + verdict_name(id) + ", Laplacian " + verdict_name(lap) + ", shifted scaling " +
                  verdict_name(shifted) + ", near-zero example exit code " + std::to_string(code)};
}

// 10. Dimer band structure.
Result criterion10() {
  const auto g = z1();
  const auto k = add(make_kernel(g, constant(1.0), hop(*g)), make_kernel(g, periodic(*g, {2}, {1.0, -1.0}), delta(g->identity())));
  const auto bloch = bloch_spectrum(k, 4096);
  SpectralSet envelope;
  for (int i = 0; i <= 100000; ++i) {
    const double c = std::cos(kPi * i / 100000);
    envelope.points.push_back(std::sqrt(1 + 4 * c * c));
    envelope.points.push_back(-std::sqrt(1 + 4 * c * c));
  }
  const double d = hausdorff_distance(bloch, envelope);
  const auto r = truncation_crosscheck(k, 2000, 1e-3);
  std::set<double> listed;
  for (auto o : r.outliers) listed.insert(o.real());
  int in_gap = 0, unreported = 0;
  for (auto l : r.eigenvalues)
    if (std::abs(l.real()) < 1 - 1e-2) ++in_gap, unreported += !listed.count(l.real());
  return {d <= 1e-3 && unreported == 0, "d_H(Bloch, envelope) " + num(d) + " <= 1e-3; " + std::to_string(in_gap) +
                                            " truncation eigenvalues in the gap, " + std::to_string(unreported) +
                                            " of them unreported"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::function<Result()> run;
    double budget_s;
    bool expected_failure;
  };
  // Criterion 7 is out of reach at N = 2000; see README.
  const std::vector<Criterion> criteria = {{1, criterion1, 10, false}, {2, criterion2, 5, false},  {3, criterion3, 10, false},
                                           {4, criterion4, 5, false},  {5, criterion5, 30, false}, {6, criterion6, 30, false},
                                           {7, criterion7, 120, true}, {8, criterion8, 60, false}, {9, criterion9, 30, false},
                                           {10, criterion10, 60, false}};
  int unexpected = 0, passed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = r.pass && secs < c.budget_s;
    passed += ok;
    if (!ok && !c.expected_failure) ++unexpected;
    std::printf("criterion %2d: %s  %s; runtime %.2f s (budget %.0f s)%s\n", c.id, ok ? "PASS" : "FAIL", r.detail.c_str(),
                secs, c.budget_s, !ok && c.expected_failure ? " [known failure]" : "");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria pass, %d unexpected failures\n", passed, criteria.size(), unexpected);
  return unexpected == 0 ? 0 : 1;
}
