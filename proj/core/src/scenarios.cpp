#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "tapearm/simulator.hpp"

namespace tapearm {
namespace {

constexpr double kDt = 0.01;

SimState start_at(const JointState& j, const ManipulatorParams& params) {
  return make_sim_state(ControlState{0.0, 0.0, j.l1, j.l2}, j.theta, params);
}

std::string point_text(double x, double y) { return fmt::format("({:.17g},{:.17g})", x, y); }

JointState solve_or_throw(Point2 p, double theta, const ManipulatorParams& params) {
  auto s = ik_at_theta(p, theta, params);
  if (!s) throw std::logic_error("built-in scenario target is not reachable");
  return *s;
}

// Stowed, grow the tapes, move the node, then bend.
Scenario deploy_and_bend() {
  Scenario s;
  s.name = "deploy-and-bend";
  s.description = "extend the tapes, drive the node toward the base, then bend with the cables";
  s.dt = kDt;
  s.limits = {0.05, 0.05, 0.05};
  const JointState stowed{s.params.l1_min, 0.05, 0.0};
  const JointState deployed{0.376, 0.35, deg_to_rad(30.0)};
  s.initial = start_at(stowed, s.params);
  PlanOptions opt{s.limits, PlanMode::Sequential, s.dt};
  s.profile = plan_through_states(stowed, std::span(&deployed, 1), s.params, opt);
  const Pose goal = forward_kinematics_unchecked(deployed);
  s.checks = {"target:" + point_text(goal.x, goal.y), "visit_theta:30deg", "eq3_residual",
              "no_violations"};
  return s;
}

// Two targets, short-l1 then long-l1 configuration.
Scenario reach_two_targets() {
  Scenario s;
  s.name = "reach-two-targets";
  s.description = "reach (22.9 cm, 83.8 cm) with a short l1, then (7.6 cm, 83.8 cm) with a long l1";
  s.dt = kDt;
  s.limits = {0.05, 0.05, 0.05};
  const JointState start{s.params.l1_min, 0.6, 0.0};
  const Point2 first{0.229, 0.838};
  const Point2 second{0.076, 0.838};
  const double first_theta = *min_end_effector_angle(first, s.params);
  std::vector<JointState> states{solve_or_throw(first, first_theta, s.params),
                                 solve_or_throw(second, deg_to_rad(20.0), s.params)};
  s.initial = start_at(start, s.params);
  s.profile = plan_through_states(start, states, s.params, {s.limits, PlanMode::Simultaneous, s.dt});
  s.checks = {"visit:" + point_text(first.x, first.y), "target:" + point_text(second.x, second.y),
              "eq3_residual", "no_violations"};
  return s;
}

// Hold (7.6 cm, 68.6 cm) while the node moves from the minimum-angle
// configuration through 10 deg to 16.7 deg.
Scenario multi_config_same_target() {
  Scenario s;
  s.name = "multi-config-same-target";
  s.description = "hold the end effector at (7.6 cm, 68.6 cm) through 7.1, 10 and 16.7 deg";
  s.dt = kDt;
  s.limits = {0.05, 0.05, 0.05};
  const Point2 target{0.076, 0.686};
  const double lo = *min_end_effector_angle(target, s.params);
  const std::vector<double> stops{lo, deg_to_rad(10.0), deg_to_rad(16.7)};
  // short chords along the inverse-kinematics family keep the tip on target
  const double max_step = deg_to_rad(0.1);
  std::vector<JointState> path;
  for (std::size_t i = 1; i < stops.size(); ++i) {
    const int n = static_cast<int>(std::ceil((stops[i] - stops[i - 1]) / max_step));
    for (int k = 1; k <= n; ++k) {
      const double theta = k == n ? stops[i] : stops[i - 1] + (stops[i] - stops[i - 1]) * k / n;
      path.push_back(solve_or_throw(target, theta, s.params));
    }
  }
  const JointState start = solve_or_throw(target, lo, s.params);
  s.initial = start_at(start, s.params);
  s.profile = plan_through_states(start, path, s.params, {s.limits, PlanMode::Simultaneous, s.dt});
  s.checks = {"hold_target:" + point_text(target.x, target.y), "visit_theta:7.1deg",
              "visit_theta:10deg", "visit_theta:16.7deg", "eq3_residual", "no_violations"};
  return s;
}

// Retract while the cables hold 22 deg.
Scenario constant_angle_retraction() {
  Scenario s;
  s.name = "constant-angle-retraction";
  s.description = "retract 30 cm of tape at 2 cm/s while holding theta at 22 deg";
  s.dt = kDt;
  const JointState start{0.40, 0.50, deg_to_rad(22.0)};
  s.initial = start_at(start, s.params);
  const double q1_rate = -0.02;
  const auto cables = constant_theta_cable_rates(q1_rate, 0.0, start.theta);
  s.profile.segments.push_back({15.0, {q1_rate, 0.0, cables.left, cables.right}});
  s.checks = {"theta_constant:22deg", "eq3_residual", "l1_delta:-0.3", "no_violations"};
  return s;
}

Scenario stationary_bend_base(bool coordinated) {
  Scenario s;
  s.dt = kDt;
  const JointState start{0.30, 0.60, deg_to_rad(20.0)};
  s.initial = start_at(start, s.params);
  RateCommand cmd;
  if (coordinated) {
    cmd = stationary_bend_rates(-0.05);
  } else {
    // node driven toward the tip with no matching retraction
    const auto cables = constant_theta_cable_rates(0.0, 0.05, start.theta);
    cmd = {0.0, 0.05, cables.left, cables.right};
  }
  s.profile.segments.push_back({10.0, cmd});
  return s;
}

// Retraction matched by node drive keeps the bend point fixed.
Scenario stationary_bend() {
  Scenario s = stationary_bend_base(true);
  s.name = "stationary-bend";
  s.description = "retract at 5 cm/s while driving the node forward at 5 cm/s; l1 stays fixed";
  s.checks = {"l1_constant", "bend_point_fixed", "l1_delta:0", "theta_constant:20deg",
              "eq3_residual", "no_violations"};
  return s;
}

// Node drive alone shortens l2 but also grows l1.
Scenario stationary_bend_uncoordinated() {
  Scenario s = stationary_bend_base(false);
  s.name = "stationary-bend-uncoordinated";
  s.description = "drive the node forward without retracting; l1 grows by the node travel";
  s.checks = {"expect_fail:l1_constant", "expect_fail:bend_point_fixed", "l1_delta:0.5",
              "theta_constant:20deg", "eq3_residual"};
  return s;
}

}  // namespace

std::vector<Scenario> builtin_scenarios() {
  return {deploy_and_bend(),           reach_two_targets(), multi_config_same_target(),
          constant_angle_retraction(), stationary_bend(),   stationary_bend_uncoordinated()};
}

std::vector<std::string> builtin_scenario_names() {
  return {"deploy-and-bend",           "reach-two-targets", "multi-config-same-target",
          "constant-angle-retraction", "stationary-bend",   "stationary-bend-uncoordinated"};
}

Scenario builtin_scenario(const std::string& name) {
  if (name == "deploy-and-bend") return deploy_and_bend();
  if (name == "reach-two-targets") return reach_two_targets();
  if (name == "multi-config-same-target") return multi_config_same_target();
  if (name == "constant-angle-retraction") return constant_angle_retraction();
  if (name == "stationary-bend") return stationary_bend();
  if (name == "stationary-bend-uncoordinated") return stationary_bend_uncoordinated();
  throw std::out_of_range("unknown scenario '" + name + "'");
}

}  // namespace tapearm
