#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "corona/catalog.hpp"
#include "corona/errors.hpp"
#include "corona/spectra.hpp"

using namespace corona;

namespace {

using GroupPtr = std::shared_ptr<const GroupSpec>;

GroupPtr z1() { return std::make_shared<const GroupSpec>(GroupSpec::lattice(1)); }

Profile hop(const GroupSpec& g) { return {{g.make({1}), 1.0}, {g.make({-1}), 1.0}}; }

KernelSymbol laplacian(const GroupPtr& g) { return make_kernel(g, constant(1.0), hop(*g)); }

KernelSymbol dimer(const GroupPtr& g, double lambda) {
  return add(laplacian(g), make_kernel(g, periodic(*g, {2}, {lambda, -lambda}), delta(g->identity())));
}

}  // namespace

TEST(Spectra, PathEigenvalues) {
  const int n = 200;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = 1.0;
  const auto eig = eig_dense(m, true);
  ASSERT_EQ(eig.size(), static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k)
    EXPECT_NEAR(eig[n - k].real(), 2.0 * std::cos(k * std::numbers::pi / (n + 1)), 1e-12);
}

TEST(Spectra, BandSolverAgreesWithDense) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 300, kd = 3;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = u(rng);
    for (int d = 1; d <= kd && i + d < n; ++d) {
      m(i, i + d) = cplx(u(rng), u(rng));
      m(i + d, i) = std::conj(m(i, i + d));
    }
  }
  const Eigen::SparseMatrix<cplx, Eigen::RowMajor> sp = m.sparseView();
  EXPECT_EQ(bandwidth(sp), kd);
  auto band = eig_band_hermitian(sp);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  for (int i = 0; i < n; ++i) EXPECT_NEAR(band[i], es.eigenvalues()(i), 1e-11);
}

TEST(Spectra, NonHermitianEigenvalues) {
  Eigen::MatrixXcd m(2, 2);
  m << 0.0, 1.0, -1.0, 0.0;
  const auto eig = eig_dense(m, false);
  ASSERT_EQ(eig.size(), 2u);
  EXPECT_NEAR(std::abs(eig[0] - cplx(0, -1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(eig[1] - cplx(0, 1)), 0.0, 1e-14);
}

TEST(Spectra, SigmaMinMatchesSvd) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(30, 30);
  for (int i = 0; i < 30; ++i)
    for (int j = i; j < 30; ++j) t(i, j) = cplx(u(rng), u(rng));
  for (cplx z : {cplx(0.1, 0.2), cplx(-0.5, 0.0), cplx(1.0, -1.0)}) {
    Eigen::MatrixXcd a = t - z * Eigen::MatrixXcd::Identity(30, 30);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    EXPECT_NEAR(sigma_min_triangular(t, z), svd.singularValues()(29), 1e-8 * (1 + svd.singularValues()(29)));
  }
}

TEST(Spectra, PseudospectrumOfNormalMatrix) {
  // For a normal matrix sigma_min(M - z) is the distance to the spectrum.
  const auto g = std::make_shared<const GroupSpec>(GroupSpec::finite(catalog::cyclic(2)));
  const auto k = make_kernel(g, periodic(*g, {}, {0.0, 1.0}), delta(g->identity()));
  const auto m = schrodinger_matrix(k, 0, 0);
  const double eps = 0.1;
  const auto ps = pseudospectrum(m, eps, std::array<double, 4>{-0.5, 1.5, -0.5, 0.5}, 101);
  ASSERT_FALSE(ps.points.empty());
  for (auto p : ps.points) EXPECT_LE(std::min(std::abs(p), std::abs(p - 1.0)), eps + 1e-12);
  EXPECT_LT(ps.distance_to(0.0), ps.resolution + 1e-12);
  EXPECT_LT(ps.distance_to(1.0), ps.resolution + 1e-12);
  EXPECT_THROW(pseudospectrum(m, eps, std::array<double, 4>{1.0, 1.0, 0.0, 1.0}, 16), EmptyRegion);
}

TEST(Spectra, BlochDimerMatchesEnvelope) {
  const auto g = z1();
  const auto s = bloch_spectrum(dimer(g, 1.0), 4096);
  // Envelope +-sqrt(1 + 4 cos^2 theta) sampled independently.
  SpectralSet env;
  for (int i = 0; i <= 20000; ++i) {
    const double c = std::cos(std::numbers::pi * i / 20000);
    env.points.push_back(std::sqrt(1 + 4 * c * c));
    env.points.push_back(-std::sqrt(1 + 4 * c * c));
  }
  EXPECT_LT(hausdorff_distance(s, env), 1e-3);
  EXPECT_FALSE(certifies_zero(s));
  EXPECT_NEAR(s.distance_to(0.0), 1.0, 1e-12);
}

TEST(Spectra, BlochOnFiniteGroupIsExact) {
  const auto g = std::make_shared<const GroupSpec>(GroupSpec::finite(catalog::symmetric3()));
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Profile p;
  for (const auto& x : g->enumerate_window(0)) p[x] = u(rng);
  const auto k = add(make_kernel(g, constant(1.0), p), involution(make_kernel(g, constant(1.0), p)));
  const auto s = bloch_spectrum(k, 64);
  const auto eig = eig_dense(schrodinger_matrix(k, 0, 0));
  for (auto l : eig) EXPECT_LT(s.distance_to(l), 1e-12);
  EXPECT_EQ(s.resolution, 0.0);
}

TEST(Spectra, BlochCellCap) {
  const auto g = z1();
  const auto k = make_kernel(g, periodic(*g, {5000}, std::vector<cplx>(5000, 1.0)), delta(g->identity()));
  EXPECT_THROW(bloch_spectrum(k, 64, 4096), IncommensurablePeriods);
}

TEST(Spectra, AsymptoticSpectrumRejectsSymbolicLeftovers) {
  const auto g = z1();
  const auto k = make_kernel(g, slowly_oscillating(*g, SoGenerator::Tanh, 0), delta(g->identity()));
  EXPECT_THROW(asymptotic_spectrum(k), UnsupportedLimitKernel);
}

TEST(Spectra, LaplacianEssentialSpectrum) {
  const auto g = z1();
  const auto ess = essential_spectrum(laplacian(g));
  EXPECT_NEAR(hausdorff_distance(ess.set, SpectralSet::interval(-2, 2)), 0.0, 1e-15);
  EXPECT_NEAR(ess.set.resolution, 4 * std::numbers::pi / 4096, 1e-15);
  EXPECT_EQ(ess.provenance.size(), 1u);
  EXPECT_TRUE(certifies_zero(ess.set));
}

TEST(Spectra, FiniteGroupHasNoEssentialSpectrum) {
  const auto g = std::make_shared<const GroupSpec>(GroupSpec::finite(catalog::dihedral4()));
  const auto k = make_kernel(g, constant(1.0), delta(g->identity()));
  EXPECT_TRUE(essential_spectrum(k).set.is_empty());
  EXPECT_EQ(is_fredholm(k).verdict, Verdict::Fredholm);
}

TEST(Spectra, CompactPerturbationInvariance) {
  const auto g = z1();
  const auto base = laplacian(g);
  const auto pert = add(base, make_kernel(g, vanishing(*g, {{g->identity(), 10.0}}), delta(g->identity())));
  EXPECT_EQ(hausdorff_distance(essential_spectrum(base).set, essential_spectrum(pert).set), 0.0);
}

TEST(Spectra, ScalingFormula) {
  const auto g = z1();
  const auto a = sum(*g, {constant(2.0), slowly_oscillating(*g, SoGenerator::SinSqrt, 0)});
  const auto k = make_kernel(g, a, hop(*g));
  const auto f = formula_spectrum(k);
  ASSERT_TRUE(f);
  EXPECT_NEAR(hausdorff_distance(*f, SpectralSet::interval(-6, 6)), 0.0, 1e-15);
  const auto ess = essential_spectrum(k);
  EXPECT_LE(hausdorff_distance(ess.set, *f), ess.set.resolution + f->resolution);
}

TEST(Spectra, SumFormula) {
  const auto g = z1();
  const auto k = add(laplacian(g), make_kernel(g, slowly_oscillating(*g, SoGenerator::Arctan, 0), delta(g->identity())));
  const auto f = formula_spectrum(k);
  ASSERT_TRUE(f);
  const auto ess = essential_spectrum(k);
  EXPECT_EQ(ess.provenance.size(), 2u);
  EXPECT_LE(hausdorff_distance(ess.set, *f), 5e-3);
}

TEST(Spectra, FormulaDeclinesOtherShapes) {
  const auto g = z1();
  EXPECT_FALSE(formula_spectrum(dimer(g, 1.0)));
}

TEST(Spectra, FredholmVerdicts) {
  const auto g = z1();
  EXPECT_EQ(is_fredholm(make_kernel(g, constant(1.0), delta(g->identity()))).verdict, Verdict::Fredholm);
  EXPECT_EQ(is_fredholm(laplacian(g)).verdict, Verdict::NotFredholm);
  EXPECT_EQ(is_fredholm(dimer(g, 1.0)).verdict, Verdict::Fredholm);
  const auto close = add(laplacian(g), make_kernel(g, constant(2.001), delta(g->identity())));
  EXPECT_EQ(is_fredholm(close).verdict, Verdict::Inconclusive);
  const auto far = add(laplacian(g), make_kernel(g, constant(2.5), delta(g->identity())));
  const auto cert = is_fredholm(far);
  EXPECT_EQ(cert.verdict, Verdict::Fredholm);
  ASSERT_EQ(cert.witnesses.size(), 1u);
  EXPECT_NEAR(cert.witnesses[0].distance_to_zero, 0.5, 1e-12);
}

TEST(Spectra, CrosscheckLaplacian) {
  const auto g = z1();
  const auto r = truncation_crosscheck(laplacian(g), 300, 0.01);
  EXPECT_TRUE(r.decisive);
  EXPECT_TRUE(r.contained);
  EXPECT_EQ(r.eigenvalues.size(), 601u);
  EXPECT_TRUE(r.outliers.empty());
}

TEST(Spectra, CrosscheckAdvisoryForShift) {
  const auto g = z1();
  const auto r = truncation_crosscheck(make_kernel(g, constant(1.0), {{g->make({1}), 1.0}}), 500, 1e-3);
  EXPECT_FALSE(r.decisive);
  EXPECT_EQ(r.window, 60);
  EXPECT_GT(r.max_sigma_min, 0.0);
}

TEST(Spectra, CrosscheckLaplacianMatchesPathOracle) {
  const auto g = z1();
  const auto r = truncation_crosscheck(laplacian(g), 1000, 1e-2);
  // Path graph on M vertices: eigenvalues 2 cos(k pi / (M + 1)); the predicted
  // interval is farthest from the cloud at the midpoint of the widest gap.
  const int m = 2001;
  std::vector<double> eig;
  for (int k = 1; k <= m; ++k) eig.push_back(2 * std::cos(k * std::numbers::pi / (m + 1)));
  std::sort(eig.begin(), eig.end());
  double half_gap = 2.0 - eig.back();
  for (std::size_t i = 0; i + 1 < eig.size(); ++i) half_gap = std::max(half_gap, 0.5 * (eig[i + 1] - eig[i]));
  EXPECT_TRUE(r.contained);
  EXPECT_NEAR(r.containment_distance, half_gap, 1e-6);
  EXPECT_GT(r.containment_distance, 1e-3);
  EXPECT_TRUE(r.outliers.empty());
}
