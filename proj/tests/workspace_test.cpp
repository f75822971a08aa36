#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "tapearm/workspace.hpp"
#include "test_support.hpp"

using namespace tapearm;

TEST(IkAtTheta, MultiConfigurationLengths) {
  const ManipulatorParams params;
  const Point2 target{0.076, 0.686};
  struct Case {
    double theta_deg, l1_cm, l2_cm;
  };
  const auto iv = feasible_theta_interval(target, params).at(0);
  for (const Case c : {Case{7.1, 7.6, 61.5}, Case{10.0, 25.4, 43.8}, Case{16.7, 43.2, 26.5}}) {
    // reported angles carry one decimal; 7.1 rounds the exact minimum, which
    // sits 0.002 deg above it with l1 on its lower bound
    const double theta = std::clamp(deg_to_rad(c.theta_deg), iv.lo, iv.hi);
    EXPECT_LE(std::abs(rad_to_deg(theta) - c.theta_deg), 0.05);
    const auto s = ik_at_theta(target, theta, params);
    ASSERT_TRUE(s) << c.theta_deg;
    EXPECT_NEAR(s->l1 * 100, c.l1_cm, 0.5);
    EXPECT_NEAR(s->l2 * 100, c.l2_cm, 0.5);
    const Pose p = forward_kinematics(*s, params);
    EXPECT_NEAR(p.x, target.x, 1e-12);
    EXPECT_NEAR(p.y, target.y, 1e-12);
  }
}

TEST(IkAtTheta, InfeasibleCases) {
  const ManipulatorParams params;
  // the literal 7.1 deg leaves l1 0.17 mm short of the node length
  EXPECT_FALSE(ik_at_theta({0.076, 0.686}, deg_to_rad(7.1), params));
  // l2 = 0.5 / sin 5deg is far beyond the reach
  EXPECT_FALSE(ik_at_theta({0.5, 0.1}, deg_to_rad(5.0), params));
  EXPECT_FALSE(ik_at_theta({0.3, 0.5}, deg_to_rad(60.0), params));
  EXPECT_FALSE(ik_at_theta({0.3, 0.5}, 0.0, params));
  EXPECT_FALSE(ik_at_theta({0.3, 0.5}, -deg_to_rad(20.0), params));
  EXPECT_FALSE(ik_at_theta({0.0, 0.5}, deg_to_rad(1.0), params));
}

TEST(IkAtTheta, AxisIsStraight) {
  const ManipulatorParams params;
  const auto s = ik_at_theta({0.0, 0.8}, 0.0, params);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->theta, 0.0);
  EXPECT_DOUBLE_EQ(s->l1 + s->l2, 0.8);
  EXPECT_FALSE(ik_at_theta({0.0, 0.05}, 0.0, params));
  EXPECT_FALSE(ik_at_theta({0.0, 2.5}, 0.0, params));
}

TEST(Interval, EndpointsAreTight) {
  const ManipulatorParams params;
  for (Point2 p : {Point2{0.076, 0.686}, Point2{0.229, 0.838}, Point2{0.6, 1.1}, Point2{0.8, 1.0}}) {
    const auto iv = feasible_theta_interval(p, params);
    ASSERT_EQ(iv.size(), 1u);
    EXPECT_TRUE(ik_at_theta(p, iv[0].lo, params));
    EXPECT_TRUE(ik_at_theta(p, iv[0].hi, params));
    EXPECT_TRUE(ik_at_theta(p, 0.5 * (iv[0].lo + iv[0].hi), params));
    EXPECT_FALSE(ik_at_theta(p, iv[0].lo - 1e-9, params));
    if (iv[0].hi < params.theta_limit) EXPECT_FALSE(ik_at_theta(p, iv[0].hi + 1e-9, params));
  }
}

TEST(Interval, MultiConfigTargetStartsNearSevenDegrees) {
  const auto iv = feasible_theta_interval({0.076, 0.686}, ManipulatorParams{});
  ASSERT_EQ(iv.size(), 1u);
  // atan2(0.076, 0.686 - 0.076)
  EXPECT_NEAR(rad_to_deg(iv[0].lo), 7.1018945666569, 1e-9);
  EXPECT_EQ(iv[0].hi, deg_to_rad(55.0));
}

TEST(Interval, MirroredSide) {
  const ManipulatorParams params;
  const auto a = feasible_theta_interval({0.4, 0.9}, params);
  const auto b = feasible_theta_interval({-0.4, 0.9}, params);
  ASSERT_EQ(a.size(), 1u);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(a[0].lo, -b[0].hi);
  EXPECT_EQ(a[0].hi, -b[0].lo);
  EXPECT_EQ(*min_end_effector_angle({-0.4, 0.9}, params), -*min_end_effector_angle({0.4, 0.9}, params));
}

TEST(Interval, UnreachablePoints) {
  const ManipulatorParams params;
  EXPECT_FALSE(reachable({0.0, 2.5}, params));
  EXPECT_FALSE(reachable({1.9, 0.1}, params));
  EXPECT_FALSE(reachable({0.5, 0.05}, params));
  EXPECT_FALSE(min_end_effector_angle({3.0, 1.0}, params));
}

TEST(Interval, AgreesWithBruteForceOnRandomPoints) {
  const ManipulatorParams params;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.0, 2.0);
  int disagreements = 0;
  for (int i = 0; i < 3000; ++i) {
    const double x = ux(rng), y = uy(rng);
    const auto ref = oracle::brute_force_min_angle(x, y, params);
    const auto got = min_end_effector_angle({x, y}, params);
    if (ref.reachable != got.has_value()) {
      // only possible when the feasible interval is narrower than the sweep step
      const auto iv = feasible_theta_interval({x, y}, params);
      ASSERT_TRUE(!iv.empty() && iv[0].width() < deg_to_rad(0.01)) << x << "," << y;
      ++disagreements;
      continue;
    }
    if (got) EXPECT_NEAR(rad_to_deg(*got), rad_to_deg(ref.min_angle), 0.01) << x << "," << y;
  }
  EXPECT_LT(disagreements, 5);
}

TEST(Interval, SecondLinkMinimumLimitsTheAngle) {
  ManipulatorParams params;
  params.l2_min = 0.2;
  const Point2 p{0.1, 0.8};
  const auto iv = feasible_theta_interval(p, params);
  ASSERT_EQ(iv.size(), 1u);
  EXPECT_NEAR(iv[0].hi, std::asin(0.5), 1e-12);
  const auto ref = oracle::brute_force_min_angle(p.x, p.y, params);
  EXPECT_NEAR(rad_to_deg(*min_end_effector_angle(p, params)), rad_to_deg(ref.min_angle), 0.01);
}

TEST(Grid, MirrorSymmetric) {
  const auto g = compute_grid(ManipulatorParams{}, Bounds{}, 40, 20);
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const auto& a = g.at(ix, iy);
      const auto& b = g.at(g.nx - 1 - ix, iy);
      EXPECT_EQ(a.x, -b.x);
      EXPECT_EQ(a.reachable, b.reachable);
      if (a.min_angle) EXPECT_EQ(*a.min_angle, -*b.min_angle);
    }
  }
}

TEST(Grid, AxisColumnIsStraight) {
  const ManipulatorParams params;
  const auto g = compute_grid(params, Bounds{}, 41, 20);
  int reachable_on_axis = 0;
  for (int iy = 0; iy < g.ny; ++iy) {
    const auto& c = g.at(20, iy);
    EXPECT_EQ(c.x, 0.0);
    if (c.reachable) {
      EXPECT_EQ(*c.min_angle, 0.0);
      ++reachable_on_axis;
    }
  }
  EXPECT_GT(reachable_on_axis, 10);
}

TEST(Grid, ThreadCountDoesNotMatter) {
  const ManipulatorParams params;
  const auto a = compute_grid(params, Bounds{}, 30, 17, 1);
  const auto b = compute_grid(params, Bounds{}, 30, 17, 4);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].x, b.cells[i].x);
    EXPECT_EQ(a.cells[i].min_angle, b.cells[i].min_angle);
  }
}

TEST(Grid, ResolutionForm) {
  const ManipulatorParams params;
  const auto g = compute_grid(params, Bounds{}, 0.05);
  EXPECT_EQ(g.nx, 80);
  EXPECT_EQ(g.ny, 40);
  EXPECT_GT(g.reachable_fraction(), 0.2);
  EXPECT_LT(g.reachable_fraction(), 0.8);
  EXPECT_THROW(compute_grid(params, Bounds{}, 0.0), std::out_of_range);
  EXPECT_TRUE(compute_grid(params, Bounds{0, 0, 0, 1}, 0.05).empty());
  EXPECT_EQ(compute_grid(params, Bounds{0, 0, 0, 1}, 0.05).reachable_fraction(), 0.0);
}

TEST(Grid, CellCentersInsideBounds) {
  const Bounds b{-1.0, 0.5, 0.2, 1.4};
  const auto g = compute_grid(ManipulatorParams{}, b, 7, 5);
  EXPECT_NEAR(g.at(0, 0).x, -1.0 + 1.5 / 14, 1e-15);
  EXPECT_NEAR(g.at(6, 4).y, 1.4 - 1.2 / 10, 1e-15);
}
