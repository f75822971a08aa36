#include <cmath>
#include <cstring>

#include <gtest/gtest.h>

#include "tapearm/simulator.hpp"

using namespace tapearm;

namespace {

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool rows_identical(const SimState& a, const SimState& b) {
  return bit_equal(a.time, b.time) && bit_equal(a.control.q1, b.control.q1) &&
         bit_equal(a.control.q2, b.control.q2) && bit_equal(a.cables.left, b.cables.left) &&
         bit_equal(a.cables.right, b.cables.right) && bit_equal(a.joint.l1, b.joint.l1) &&
         bit_equal(a.joint.l2, b.joint.l2) && bit_equal(a.joint.theta, b.joint.theta) &&
         bit_equal(a.pose.x, b.pose.x) && bit_equal(a.pose.y, b.pose.y);
}

const CheckResult* find_check(const TrajectoryLog& log, const std::string& spec) {
  for (const auto& c : log.checks) {
    if (c.spec == spec) return &c;
  }
  return nullptr;
}

}  // namespace

TEST(SimState, MakeIsConsistent) {
  const ManipulatorParams params;
  const auto s = make_sim_state({0.0, 0.0, 0.4, 0.5}, deg_to_rad(22.0), params);
  EXPECT_EQ(eq3_residual(s, params.cable_offset), 0.0);
  const auto r = check_consistency(s, params);
  EXPECT_LE(r.derivation_residual, 1e-14);
  EXPECT_NEAR(r.joint_limit_margin, deg_to_rad(33.0), 1e-15);
  EXPECT_NEAR(r.total_length_margin, 1.1, 1e-15);
}

TEST(SimState, CorruptedCableIsReported) {
  const ManipulatorParams params;
  auto s = make_sim_state({0.0, 0.0, 0.4, 0.5}, deg_to_rad(22.0), params);
  s.cables.left += 1e-3;
  const auto r = check_consistency(s, params);
  EXPECT_NEAR(r.cable_residual, 1e-3, 1e-12);
  EXPECT_NEAR(r.cable_residual_left, 1e-3, 1e-12);
  EXPECT_EQ(r.cable_residual_right, 0.0);
  EXPECT_GT(r.derivation_residual, 1e-3);
}

TEST(Step, DerivesThetaFromCables) {
  const ManipulatorParams params;
  const auto s = make_sim_state({0.0, 0.0, 0.3, 0.3}, 0.0, params);
  const auto out = step(s, {0.0, 0.0, 0.01, -0.01}, 0.5, params);
  EXPECT_NEAR(out.state.joint.theta, 2 * std::asin(0.01 / (4 * params.cable_offset)), 1e-15);
  EXPECT_EQ(out.state.time, 0.5);
  EXPECT_TRUE(out.violations.empty());
  EXPECT_THROW(step(s, {}, 0.0, params), std::invalid_argument);
}

TEST(Step, ViolationsAreSoft) {
  const ManipulatorParams params;
  const auto s = make_sim_state({0.0, 0.0, 0.3, 0.3}, deg_to_rad(54.0), params);
  const auto out = step(s, {0.0, 0.0, 0.002, -0.002}, 1.0, params);
  ASSERT_FALSE(out.violations.empty());
  EXPECT_EQ(out.violations[0].kind, BoundKind::JointLimit);
  EXPECT_GT(std::abs(out.state.joint.theta), params.theta_limit);
}

TEST(Step, ImpossibleCablesThrow) {
  const ManipulatorParams params;
  const auto s = make_sim_state({0.0, 0.0, 0.3, 0.3}, 0.0, params);
  EXPECT_THROW(step(s, {0.0, 0.0, 0.1, -0.1}, 1.0, params), CableInconsistencyError);
}

TEST(Checks, Parse) {
  auto c = parse_check("theta_constant:22deg");
  EXPECT_EQ(c.kind, CheckKind::ThetaConstant);
  EXPECT_NEAR(c.value, deg_to_rad(22.0), 1e-15);
  EXPECT_EQ(c.tolerance, 1e-6);
  c = parse_check("visit_theta:0.2rad@0.01deg");
  EXPECT_EQ(c.kind, CheckKind::VisitTheta);
  EXPECT_EQ(c.value, 0.2);
  EXPECT_NEAR(c.tolerance, deg_to_rad(0.01), 1e-15);
  c = parse_check("expect_fail:target:(0.1,0.2)@1e-4");
  EXPECT_TRUE(c.expect_fail);
  EXPECT_EQ(c.kind, CheckKind::Target);
  EXPECT_EQ(c.point.x, 0.1);
  EXPECT_EQ(c.point.y, 0.2);
  EXPECT_EQ(c.tolerance, 1e-4);
  c = parse_check("l1_delta:-0.3");
  EXPECT_EQ(c.value, -0.3);
  EXPECT_EQ(parse_check("no_violations").tolerance, 0.0);
  EXPECT_EQ(parse_check("eq3_residual").tolerance, 1e-9);
}

TEST(Checks, ParseErrors) {
  EXPECT_THROW(parse_check("bogus"), ScenarioError);
  EXPECT_THROW(parse_check("target:(1)"), ScenarioError);
  EXPECT_THROW(parse_check("theta_constant"), ScenarioError);
  EXPECT_THROW(parse_check("l1_delta:abc"), ScenarioError);
  EXPECT_THROW(parse_check("eq3_residual@x"), ScenarioError);
}

TEST(Checks, EvaluateOnRows) {
  const ManipulatorParams params;
  std::vector<LogRow> rows;
  for (int k = 0; k < 3; ++k) {
    const auto s = make_sim_state({0.0, 0.01 * k, 0.3, 0.3}, 0.1, params);
    rows.push_back({s, 0.0, {}});
  }
  const auto res = evaluate_checks({"l1_constant", "l1_delta:0.02", "expect_fail:l1_constant"}, rows);
  ASSERT_EQ(res.size(), 3u);
  EXPECT_FALSE(res[0].held);
  EXPECT_FALSE(res[0].passed);
  EXPECT_NEAR(res[0].worst, 0.02, 1e-15);
  EXPECT_TRUE(res[1].passed);
  EXPECT_TRUE(res[2].passed);
  EXPECT_FALSE(res[2].held);
}

TEST(Scenario, ValidationRejectsBadInput) {
  auto sc = builtin_scenario("stationary-bend");
  auto bad = sc;
  bad.dt = 0.0;
  EXPECT_THROW(validate_scenario(bad), ScenarioError);
  bad = sc;
  bad.profile.segments[0].duration = 0.015;
  EXPECT_THROW(validate_scenario(bad), ScenarioError);
  bad = sc;
  bad.profile.segments[0].command.q1_rate = 5.0;
  EXPECT_THROW(validate_scenario(bad), ScenarioError);
  bad = sc;
  bad.checks.push_back("nope");
  EXPECT_THROW(validate_scenario(bad), ScenarioError);
  bad = sc;
  bad.initial.cables.left += 1e-6;
  EXPECT_THROW(validate_scenario(bad), ScenarioError);
  EXPECT_NO_THROW(validate_scenario(sc));
}

TEST(Builtins, NamesAndLookup) {
  const auto names = builtin_scenario_names();
  EXPECT_EQ(names.size(), 6u);
  for (const auto& n : names) EXPECT_EQ(builtin_scenario(n).name, n);
  EXPECT_THROW(builtin_scenario("nosuch"), std::out_of_range);
}

TEST(Builtins, AllChecksPass) {
  for (const auto& sc : builtin_scenarios()) {
    const auto log = run_scenario(sc);
    for (const auto& c : log.checks) EXPECT_TRUE(c.passed) << sc.name << ": " << c.spec << " worst " << c.worst;
    EXPECT_EQ(log.segment_ends.size(), sc.profile.segments.size());
  }
}

TEST(Builtins, Deterministic) {
  for (const auto& sc : builtin_scenarios()) {
    const auto a = run_scenario(sc);
    const auto b = run_scenario(sc);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      ASSERT_TRUE(rows_identical(a.rows[i].state, b.rows[i].state)) << sc.name << " row " << i;
    }
  }
}

TEST(Builtins, SegmentEndsIndependentOfDt) {
  for (const auto& sc : builtin_scenarios()) {
    auto half = sc;
    half.dt = sc.dt / 2;
    const auto a = run_scenario(sc);
    const auto b = run_scenario(half);
    ASSERT_EQ(a.segment_ends.size(), b.segment_ends.size());
    for (std::size_t k = 0; k < a.segment_ends.size(); ++k) {
      EXPECT_TRUE(rows_identical(a.rows[a.segment_ends[k]].state, b.rows[b.segment_ends[k]].state))
          << sc.name << " segment " << k;
    }
    EXPECT_EQ(b.rows.size() - 1, 2 * (a.rows.size() - 1));
  }
}

TEST(Builtins, StationaryBendContrast) {
  const auto good = run_scenario(builtin_scenario("stationary-bend"));
  const auto bad = run_scenario(builtin_scenario("stationary-bend-uncoordinated"));
  EXPECT_LE(find_check(good, "l1_constant")->worst, 1e-6);
  EXPECT_LE(find_check(good, "bend_point_fixed")->worst, 1e-6);
  const auto* growth = find_check(bad, "l1_delta:0.5");
  ASSERT_NE(growth, nullptr);
  EXPECT_LE(growth->worst, 1e-6);
  const auto* expected = find_check(bad, "expect_fail:l1_constant");
  ASSERT_NE(expected, nullptr);
  EXPECT_FALSE(expected->held);
  EXPECT_TRUE(expected->passed);
}

TEST(Builtins, ConstantAngleRetraction) {
  const auto log = run_scenario(builtin_scenario("constant-angle-retraction"));
  for (const auto& row : log.rows) {
    EXPECT_NEAR(row.state.joint.theta, deg_to_rad(22.0), 1e-6);
    EXPECT_LE(row.eq3_residual, 1e-9);
  }
  EXPECT_NEAR(log.rows.back().state.joint.l1 - log.rows.front().state.joint.l1, -0.3, 1e-9);
}
