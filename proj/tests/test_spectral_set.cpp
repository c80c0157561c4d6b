#include <gtest/gtest.h>

#include <numbers>

#include "corona/spectral_set.hpp"

using namespace corona;

TEST(SpectralSet, DistanceToPrimitives) {
  SpectralSet s = SpectralSet::interval(-1.0, 2.0);
  s.circles.push_back({cplx(10.0, 0.0), 1.0});
  EXPECT_DOUBLE_EQ(s.distance_to(0.5), 0.0);
  EXPECT_DOUBLE_EQ(s.distance_to(cplx(0.5, 3.0)), 3.0);
  EXPECT_DOUBLE_EQ(s.distance_to(cplx(10.0, 0.0)), 1.0);
  EXPECT_DOUBLE_EQ(s.distance_to(5.0), 3.0);
}

TEST(SpectralSet, HausdorffOfIntervalsIsExact) {
  const auto a = SpectralSet::interval(-2.0, 2.0);
  const auto b = set_union(SpectralSet::interval(-2.0, -0.5), SpectralSet::interval(0.5, 2.0));
  EXPECT_DOUBLE_EQ(directed_distance(a, b), 0.5);
  EXPECT_DOUBLE_EQ(directed_distance(b, a), 0.0);
  EXPECT_DOUBLE_EQ(hausdorff_distance(a, b), 0.5);
  EXPECT_DOUBLE_EQ(hausdorff_distance(SpectralSet::point(1.0), SpectralSet::point(cplx(1.0, 1.0))), 1.0);
}

TEST(SpectralSet, CloudAgainstInterval) {
  std::vector<cplx> pts;
  for (int k = 0; k <= 100; ++k) pts.emplace_back(-1.0 + k * 0.02, 0.0);
  const auto cloud = SpectralSet::cloud(pts, 0.01);
  EXPECT_NEAR(directed_distance(SpectralSet::interval(-1.0, 1.0), cloud), 0.01, 1e-12);
  EXPECT_NEAR(directed_distance(cloud, SpectralSet::interval(-1.0, 1.0)), 0.0, 1e-15);
}

TEST(SpectralSet, ScaleAndTranslate) {
  const auto s = set_translate(set_scale(SpectralSet::interval(1.0, 3.0), 2.0), cplx(0.0, 1.0));
  ASSERT_EQ(s.segments.size(), 1u);
  EXPECT_EQ(s.segments[0].a, cplx(2.0, 1.0));
  EXPECT_EQ(s.segments[0].b, cplx(6.0, 1.0));
}

TEST(SpectralSet, MinkowskiSumOfIntervals) {
  const auto conv = SpectralSet::interval(-2.0, 2.0);
  const auto two = set_union(SpectralSet::point(-std::numbers::pi / 2), SpectralSet::point(std::numbers::pi / 2));
  const auto s = set_minkowski_sum(conv, two);
  const auto expect = set_union(SpectralSet::interval(-2.0 - std::numbers::pi / 2, 2.0 - std::numbers::pi / 2),
                                SpectralSet::interval(-2.0 + std::numbers::pi / 2, 2.0 + std::numbers::pi / 2));
  EXPECT_NEAR(hausdorff_distance(s, expect), 0.0, 1e-15);
  EXPECT_NEAR(hausdorff_distance(set_minkowski_sum(SpectralSet::interval(0, 1), SpectralSet::interval(3, 5)),
                                 SpectralSet::interval(3, 6)),
              0.0, 1e-15);
}

TEST(SpectralSet, MinkowskiSumOfComplexPrimitives) {
  SpectralSet circle;
  circle.circles.push_back({0.0, 1.0});
  const auto s = set_minkowski_sum(circle, SpectralSet::point(cplx(0.0, 2.0)));
  EXPECT_NEAR(s.distance_to(cplx(0.0, 3.0)), 0.0, 1e-12);
  EXPECT_NEAR(s.distance_to(cplx(0.0, 2.0)), 1.0, 1e-12);
}

TEST(SpectralSet, ProductOfIntervals) {
  const auto s = set_product(SpectralSet::interval(1.0, 3.0), SpectralSet::interval(-2.0, 2.0));
  EXPECT_NEAR(hausdorff_distance(s, SpectralSet::interval(-6.0, 6.0)), 0.0, 1e-15);
  const auto t = set_product(SpectralSet::interval(1.0, 3.0), SpectralSet::interval(2.0, 4.0));
  EXPECT_NEAR(hausdorff_distance(t, SpectralSet::interval(2.0, 12.0)), 0.0, 1e-15);
}

TEST(SpectralSet, ConsolidateMergesTouchingPieces) {
  SpectralSet s;
  s.points = {0.0, 0.001, 0.002, 5.0};
  s.segments.push_back({0.002, 1.0});
  const auto c = consolidate(s, 0.0015);
  const auto comps = real_components(c);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_DOUBLE_EQ(comps[0][0], 0.0);
  EXPECT_DOUBLE_EQ(comps[0][1], 1.0);
  EXPECT_GE(c.resolution, 0.0005);
  EXPECT_EQ(consolidate(SpectralSet::interval(0, 1), 0.0).resolution, 0.0);
}

TEST(SpectralSet, ThinKeepsCoverage) {
  std::vector<cplx> pts;
  for (int i = 0; i < 1000; ++i) pts.emplace_back(std::cos(i * 0.001), std::sin(i * 0.001));
  const auto t = thin(SpectralSet::cloud(pts, 0.0), 0.05);
  EXPECT_LT(t.points.size(), pts.size());
  EXPECT_LE(directed_distance(SpectralSet::cloud(pts, 0.0), t), t.resolution);
}

TEST(SpectralSet, ToCloudStep) {
  const auto c = to_cloud(SpectralSet::interval(0.0, 1.0), 0.1);
  EXPECT_GE(c.points.size(), 11u);
  EXPECT_LE(directed_distance(SpectralSet::interval(0.0, 1.0), c, 1e-4), 0.05 + 1e-12);
}

TEST(SpectralSet, Summary) {
  EXPECT_EQ(summarize(SpectralSet::empty()), "empty set");
  EXPECT_EQ(summarize(SpectralSet::interval(-2, 2)), "[-2, 2] (resolution 0)");
}
