#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "corona/catalog.hpp"
#include "corona/coeff.hpp"
#include "corona/errors.hpp"
#include "corona/quasi_orbit.hpp"

using namespace corona;

namespace {

const GroupSpec kZ = GroupSpec::lattice(1);

Element z(std::int64_t n) { return kZ.make({n}); }

}  // namespace

TEST(Coeff, SlowlyOscillatingValues) {
  const auto s = slowly_oscillating(kZ, SoGenerator::SinSqrt, 0);
  const auto a = slowly_oscillating(kZ, SoGenerator::Arctan, 0, 2.0);
  for (std::int64_t n : {-100, -3, 0, 7, 12345}) {
    EXPECT_NEAR(evaluate(kZ, s, z(n)).real(), std::sin(std::sqrt(std::abs(static_cast<double>(n)))), 1e-14);
    EXPECT_NEAR(evaluate(kZ, a, z(n)).real(), std::atan(n / 2.0), 1e-14);
  }
}

TEST(Coeff, ConstantFolding) {
  const auto s = slowly_oscillating(kZ, SoGenerator::Tanh, 0);
  EXPECT_TRUE(sum(kZ, {constant(2.0), constant(3.0)}).is_constant());
  EXPECT_EQ(sum(kZ, {constant(2.0), constant(3.0)}).constant_value(), cplx(5.0));
  EXPECT_EQ(product(kZ, {s, constant(0.0)}).constant_value(), cplx(0.0));
  EXPECT_TRUE(same_symbol(product(kZ, {s, constant(1.0)}), s));
  EXPECT_TRUE(same_symbol(sum(kZ, {s, constant(1.0)}), sum(kZ, {constant(1.0), s})));
}

TEST(Coeff, Classification) {
  const auto s = slowly_oscillating(kZ, SoGenerator::SinSqrt, 0);
  const auto v = vanishing(kZ, {{z(4), 3.0}});
  const auto p = periodic(kZ, {2}, {1.0, -1.0});
  EXPECT_EQ(classify(constant(1.0)), CoefficientClass::Constant);
  EXPECT_EQ(classify(v), CoefficientClass::Vanishing);
  EXPECT_EQ(classify(vanishing_decay(1.0, 0.5)), CoefficientClass::Vanishing);
  EXPECT_EQ(classify(s), CoefficientClass::SlowlyOscillating);
  EXPECT_EQ(classify(sum(kZ, {s, v})), CoefficientClass::SlowlyOscillating);
  EXPECT_EQ(classify(product(kZ, {s, v})), CoefficientClass::Vanishing);
  EXPECT_EQ(classify(p), CoefficientClass::Periodic);
  EXPECT_EQ(classify(sum(kZ, {p, s})), CoefficientClass::PeriodicSlowlyOscillating);
  EXPECT_EQ(classify(product(kZ, {p, s})), CoefficientClass::PeriodicSlowlyOscillating);
}

TEST(Coeff, TranslateMatchesDefinition) {
  const auto g = GroupSpec::product({GroupSpec::lattice(1), GroupSpec::finite(catalog::symmetric3())});
  std::vector<cplx> values;
  for (int i = 0; i < 3 * 6; ++i) values.emplace_back(i, -i);
  const auto a = sum(g, {periodic(g, {3}, values), vanishing(g, {{g.make({1}, {2}), 5.0}}),
                         slowly_oscillating(g, SoGenerator::Arctan, 0)});
  for (const auto& y : {g.make({2}, {1}), g.make({-5}, {4}), g.identity()}) {
    const auto ta = translate(g, a, y);
    for (const auto& q : g.enumerate_window(3))
      EXPECT_NEAR(std::abs(evaluate(g, ta, q) - evaluate(g, a, g.multiply(g.inverse(y), q))), 0.0, 1e-14);
  }
}

TEST(Coeff, ConjugateAndProductPointwise) {
  const auto a = sum(kZ, {constant(cplx(0, 1)), slowly_oscillating(kZ, SoGenerator::CosSqrt, 0)});
  const auto b = periodic(kZ, {3}, {1.0, cplx(0, 2), -1.0});
  const auto ab = product(kZ, {a, conjugate(kZ, b)});
  for (std::int64_t n = -10; n <= 10; ++n) {
    const cplx expect = evaluate(kZ, a, z(n)) * std::conj(evaluate(kZ, b, z(n)));
    EXPECT_NEAR(std::abs(evaluate(kZ, ab, z(n)) - expect), 0.0, 1e-14);
  }
}

TEST(Coeff, KeysAreDeterministic) {
  const auto a = sum(kZ, {slowly_oscillating(kZ, SoGenerator::SinSqrt, 0), constant(2.0)});
  const auto b = sum(kZ, {constant(2.0), slowly_oscillating(kZ, SoGenerator::SinSqrt, 0)});
  EXPECT_EQ(key(a), key(b));
  EXPECT_NE(key(a), key(slowly_oscillating(kZ, SoGenerator::SinSqrt, -1)));
}

TEST(Coeff, CatalogLeavesOscillateSlowly) {
  for (auto gen : {SoGenerator::SinSqrt, SoGenerator::CosSqrt, SoGenerator::Arctan, SoGenerator::Tanh}) {
    const auto check = check_slowly_oscillating(kZ, SlowlyOscillatingNode{gen, 0, 1.0});
    EXPECT_TRUE(check.passed) << so_generator_name(gen);
    EXPECT_LT(check.max_increment.back(), 1e-3);
  }
  const auto z2 = GroupSpec::lattice(2);
  EXPECT_TRUE(check_slowly_oscillating(z2, SlowlyOscillatingNode{SoGenerator::SinSqrt, -1, 1.0}).passed);
}

TEST(Coeff, ValidationErrors) {
  const auto f = GroupSpec::finite(catalog::symmetric3());
  EXPECT_THROW(slowly_oscillating(f, SoGenerator::Arctan, 0), UnsupportedAlgebraPattern);
  EXPECT_THROW(slowly_oscillating(kZ, SoGenerator::Arctan, 0, -1.0), ValidationError);
  EXPECT_THROW(periodic(kZ, {0}, {}), ValidationError);
  EXPECT_THROW(periodic(kZ, {2}, {1.0}), ValidationError);
  EXPECT_THROW(vanishing_decay(1.0, 0.0), ValidationError);
  EXPECT_THROW(so_generator_from_name("sin"), ValidationError);
}

TEST(Coeff, SupBound) {
  EXPECT_DOUBLE_EQ(sup_bound(slowly_oscillating(kZ, SoGenerator::Arctan, 0)), std::numbers::pi / 2);
  EXPECT_GE(sup_bound(sum(kZ, {constant(2.0), slowly_oscillating(kZ, SoGenerator::SinSqrt, 0)})), 3.0);
}

TEST(QuasiOrbit, ArctanHasTwoLimits) {
  const auto a = slowly_oscillating(kZ, SoGenerator::Arctan, 0);
  const auto fam = sufficient_family(kZ, a);
  ASSERT_EQ(fam.size(), 2u);
  std::vector<double> limits;
  for (const auto& q : fam) {
    ASSERT_EQ(q.limits.size(), 1u);
    limits.push_back(q.limits[0].value.real());
    EXPECT_LT(q.limits[0].spread, 1e-9);
  }
  std::sort(limits.begin(), limits.end());
  EXPECT_NEAR(limits[0], -std::numbers::pi / 2, 1e-6);
  EXPECT_NEAR(limits[1], std::numbers::pi / 2, 1e-6);
  const auto r = cluster_range(kZ, a);
  EXPECT_TRUE(r.segments.empty());
  EXPECT_NEAR(r.distance_to(std::numbers::pi / 2), 0.0, 1e-6);
  EXPECT_NEAR(r.distance_to(0.0), std::numbers::pi / 2, 1e-6);
}

TEST(QuasiOrbit, SinSqrtClusterSetIsAnInterval) {
  const auto a = sum(kZ, {constant(2.0), slowly_oscillating(kZ, SoGenerator::SinSqrt, 0)});
  const auto r = cluster_range(kZ, a);
  ASSERT_EQ(r.segments.size(), 1u);
  EXPECT_DOUBLE_EQ(std::min(r.segments[0].a.real(), r.segments[0].b.real()), 1.0);
  EXPECT_DOUBLE_EQ(std::max(r.segments[0].a.real(), r.segments[0].b.real()), 3.0);
}

TEST(QuasiOrbit, PhaseProbesHitTheirTargets) {
  const SlowlyOscillatingNode leaf{SoGenerator::SinSqrt, 0, 1.0};
  const auto fam = sufficient_family(kZ, CoefficientSymbol(leaf));
  ASSERT_FALSE(fam.empty());
  for (std::size_t i = 0; i < fam.size(); i += 97) {
    const auto& q = fam[i];
    ASSERT_TRUE(q.probe.phase);
    EXPECT_NEAR(q.limits[0].value.real(), std::sin(*q.probe.phase), 1e-6);
  }
}

TEST(QuasiOrbit, PeriodicResidues) {
  const auto p = periodic(kZ, {3}, {1.0, 2.0, 3.0});
  const auto fam = sufficient_family(kZ, p);
  int reps = 0;
  for (const auto& q : fam) reps += q.representative;
  EXPECT_EQ(reps, 1);
  EXPECT_EQ(fam.size(), 3u);
  // The asymptotic coefficient along residue r is the translate by -r.
  for (const auto& q : fam) {
    const auto lim = asymptotic_coefficient(kZ, p, q);
    for (std::int64_t n = 0; n < 3; ++n)
      EXPECT_EQ(evaluate(kZ, lim, z(n)), evaluate(kZ, p, z(n + q.probe.residue)));
  }
}

TEST(QuasiOrbit, VanishingCollapsesToZero) {
  const auto a = sum(kZ, {vanishing(kZ, {{z(0), 10.0}}), vanishing_decay(4.0, 0.1), constant(1.0)});
  const auto fam = sufficient_family(kZ, a);
  ASSERT_FALSE(fam.empty());
  const auto lim = asymptotic_coefficient(kZ, a, fam.front());
  ASSERT_TRUE(lim.is_constant());
  EXPECT_EQ(lim.constant_value(), cplx(1.0));
}

TEST(QuasiOrbit, DivergenceIsReported) {
  ProbeOptions strict;
  strict.cauchy_tolerance = 1e-300;
  strict.escape_scale = 1;
  Probe probe{0, 1, {}, 0, 1, {}};
  for (std::int64_t k = 1; k <= 64; ++k) probe.samples.push_back(z(k * k));
  EXPECT_THROW(probe_limit(kZ, SlowlyOscillatingNode{SoGenerator::Arctan, 0, 1.0}, probe, strict), DivergentProbe);
}

TEST(QuasiOrbit, OscillationDegree) {
  const auto s = slowly_oscillating(kZ, SoGenerator::SinSqrt, 0);
  EXPECT_EQ(oscillation_degree(constant(1.0)), 0);
  EXPECT_EQ(oscillation_degree(sum(kZ, {s, constant(1.0)})), 1);
  EXPECT_EQ(oscillation_degree(product(kZ, {s, s})), 2);
}
