#include "tapearm/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace tapearm {

SimState make_sim_state(const ControlState& control, double theta, const ManipulatorParams& params,
                        double time) {
  const auto lengths = link_lengths_unchecked(control);
  SimState s;
  s.time = time;
  s.control = control;
  s.joint = {lengths.l1, lengths.l2, theta};
  s.cables = cable_lengths(s.joint, params.cable_offset);
  s.pose = forward_kinematics_unchecked(s.joint);
  return s;
}

SimState derive(double time, const ControlState& control, const CablePair& cables,
                const ManipulatorParams& params) {
  const auto lengths = link_lengths_unchecked(control);
  SimState s;
  s.time = time;
  s.control = control;
  s.cables = cables;
  s.joint = {lengths.l1, lengths.l2, theta_from_cables(cables, params.cable_offset)};
  s.pose = forward_kinematics_unchecked(s.joint);
  return s;
}

namespace {

CablePair signed_cable_residuals(const SimState& state, double cable_offset) {
  const auto expected = cable_lengths(state.joint, cable_offset);
  return {state.cables.left - expected.left, state.cables.right - expected.right};
}

}  // namespace

double eq3_residual(const SimState& state, double cable_offset) {
  const auto r = signed_cable_residuals(state, cable_offset);
  return std::max(std::abs(r.left), std::abs(r.right));
}

ConsistencyReport check_consistency(const SimState& state, const ManipulatorParams& params) {
  ConsistencyReport r;
  const auto res = signed_cable_residuals(state, params.cable_offset);
  r.cable_residual_left = res.left;
  r.cable_residual_right = res.right;
  r.cable_residual = std::max(std::abs(res.left), std::abs(res.right));

  const auto lengths = link_lengths_unchecked(state.control);
  double derived_theta = state.joint.theta;
  try {
    derived_theta = theta_from_cables(state.cables, params.cable_offset);
  } catch (const CableInconsistencyError&) {
    derived_theta = std::numeric_limits<double>::infinity();
  }
  r.derivation_residual = std::max({std::abs(lengths.l1 - state.joint.l1),
                                    std::abs(lengths.l2 - state.joint.l2),
                                    std::abs(derived_theta - state.joint.theta)});

  const auto& j = state.joint;
  r.joint_limit_margin = params.theta_limit - std::abs(j.theta);
  r.l1_margin = j.l1 - params.l1_min;
  r.l2_margin = j.l2 - params.l2_min;
  r.total_length_margin = params.max_total_length - (j.l1 + j.l2);
  r.tape_budget_margin = params.tape.total_tape_length - (j.l1 + j.l2);
  return r;
}

StepResult step(const SimState& state, const RateCommand& command, double dt,
                const ManipulatorParams& params) {
  if (!(dt > 0)) throw std::invalid_argument("time step must be positive");
  ControlState control = state.control;
  control.q1 += command.q1_rate * dt;
  control.q2 += command.q2_rate * dt;
  const CablePair cables{state.cables.left + command.left_rate * dt,
                         state.cables.right + command.right_rate * dt};
  StepResult out;
  out.state = derive(state.time + dt, control, cables, params);
  out.violations = validate_state(out.state.joint, params);
  return out;
}

bool TrajectoryLog::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

void validate_scenario(const Scenario& scenario) {
  scenario.params.validate();
  if (!(scenario.dt > 0)) throw ScenarioError("dt must be positive");
  for (std::size_t i = 0; i < scenario.profile.segments.size(); ++i) {
    const auto& seg = scenario.profile.segments[i];
    if (!(seg.duration > 0)) throw ScenarioError(fmt::format("segment {}: duration must be positive", i));
    const double steps = seg.duration / scenario.dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
      throw ScenarioError(fmt::format("segment {}: duration {:.9g} s is not a multiple of dt {:.9g} s",
                                      i, seg.duration, scenario.dt));
    }
    if (!scenario.limits.admits(seg.command)) {
      throw ScenarioError(fmt::format("segment {}: rates exceed the speed limits", i));
    }
  }
  for (const auto& c : scenario.checks) parse_check(c);
  const auto report = check_consistency(scenario.initial, scenario.params);
  constexpr double kInitialTolerance = 1e-9;
  if (!(report.cable_residual <= kInitialTolerance) ||
      !(report.derivation_residual <= kInitialTolerance)) {
    throw ScenarioError(fmt::format(
        "inconsistent initial state: cable residual {:.3g} m, derivation residual {:.3g}",
        report.cable_residual, report.derivation_residual));
  }
}

TrajectoryLog run_scenario(const Scenario& scenario) {
  validate_scenario(scenario);
  const auto& params = scenario.params;
  TrajectoryLog log;
  log.scenario = scenario.name;

  auto record = [&](const SimState& s, ViolationList v) {
    log.rows.push_back({s, eq3_residual(s, params.cable_offset), std::move(v)});
  };
  record(scenario.initial, validate_state(scenario.initial.joint, params));

  SimState anchor = scenario.initial;
  for (const auto& seg : scenario.profile.segments) {
    const auto n = static_cast<long long>(std::llround(seg.duration / scenario.dt));
    // every step is taken from the segment start, so positions at segment
    // ends do not depend on dt
    StepResult last;
    for (long long k = 1; k <= n; ++k) {
      const double elapsed = k == n ? seg.duration : static_cast<double>(k) * scenario.dt;
      last = step(anchor, seg.command, elapsed, params);
      record(last.state, last.violations);
    }
    anchor = last.state;
    log.segment_ends.push_back(log.rows.size() - 1);
  }
  log.checks = evaluate_checks(scenario.checks, log.rows);
  return log;
}

}  // namespace tapearm
