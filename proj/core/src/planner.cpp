#include "tapearm/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace tapearm {

bool SpeedLimits::admits(const RateCommand& cmd, double slack) const {
  auto ok = [&](double rate, double limit) {
    return std::isfinite(rate) && std::abs(rate) <= limit * (1.0 + slack);
  };
  return ok(cmd.q1_rate, q1) && ok(cmd.q2_rate, q2) && ok(cmd.left_rate, cable) &&
         ok(cmd.right_rate, cable);
}

double ControlProfile::total_duration() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

std::optional<JointState> ik_solve(const Pose& target, const ManipulatorParams& params) {
  return ik_at_theta({target.x, target.y}, target.phi, params);
}

std::vector<JointState> ik_enumerate(Point2 point, const ManipulatorParams& params, int count) {
  if (count < 1) throw std::invalid_argument("ik_enumerate needs count >= 1");
  const auto intervals = feasible_theta_interval(point, params);
  if (intervals.empty()) return {};
  const auto& iv = intervals.front();
  // start from the minimum-|theta| end, which sits on the side of sign(x)
  const double first = point.x < 0 ? iv.hi : iv.lo;
  const double last = point.x < 0 ? iv.lo : iv.hi;
  std::vector<JointState> out;
  if (count == 1 || iv.lo == iv.hi) {
    if (auto s = ik_at_theta(point, first, params)) out.push_back(*s);
    return out;
  }
  for (int k = 0; k < count; ++k) {
    const double theta = k == count - 1 ? last : first + (last - first) * k / (count - 1);
    if (!out.empty() && theta == out.back().theta) continue;
    if (auto s = ik_at_theta(point, theta, params)) out.push_back(*s);
  }
  return out;
}

ControlTransition controls_between(const JointState& from, const JointState& to,
                                   const ControlState& control0) {
  ControlTransition t;
  t.dq2 = from.l2 - to.l2;
  t.dq1 = (to.l1 - from.l1) - t.dq2;
  t.target = control0;
  t.target.q1 += t.dq1;
  t.target.q2 += t.dq2;
  return t;
}

RateCommand stationary_bend_rates(double q1_rate) {
  // l1_dot = q1_dot + q2_dot = 0, and l1 + l2 changes at q1_dot
  const double q2_rate = -q1_rate;
  const auto cables = constant_theta_cable_rates(q1_rate, q2_rate, 0.0);
  return {q1_rate, q2_rate, cables.left, cables.right};
}

CablePair constant_theta_cable_rates(double q1_rate, double /*q2_rate*/, double /*theta*/) {
  // d/dt of c = l1 + l2 +/- 2d sin(theta/2) at fixed theta, with l1 + l2 = q1 + const
  return {q1_rate, q1_rate};
}

namespace {

double quantize(double duration, double dt) {
  if (dt <= 0) return duration;
  const double steps = std::ceil(duration / dt - 1e-9);
  return std::max(1.0, steps) * dt;
}

double duration_for(const RateCommand& deltas, const SpeedLimits& limits) {
  return std::max({std::abs(deltas.q1_rate) / limits.q1, std::abs(deltas.q2_rate) / limits.q2,
                   std::abs(deltas.left_rate) / limits.cable,
                   std::abs(deltas.right_rate) / limits.cable});
}

// `deltas` holds total displacements; emits one segment covering them.
void emit(ControlProfile& profile, const RateCommand& deltas, double theta_hold, bool hold_theta,
          const PlanOptions& options) {
  // sub-picometer moves are rounding noise from the inverse kinematics
  constexpr double kNegligible = 1e-12;
  if (std::max({std::abs(deltas.q1_rate), std::abs(deltas.q2_rate), std::abs(deltas.left_rate),
                std::abs(deltas.right_rate)}) <= kNegligible) {
    return;
  }
  double duration = duration_for(deltas, options.limits);
  duration = quantize(duration, options.dt);
  RateCommand cmd{deltas.q1_rate / duration, deltas.q2_rate / duration, deltas.left_rate / duration,
                  deltas.right_rate / duration};
  if (hold_theta) {
    const auto cables = constant_theta_cable_rates(cmd.q1_rate, cmd.q2_rate, theta_hold);
    cmd.left_rate = cables.left;
    cmd.right_rate = cables.right;
  }
  profile.segments.push_back({duration, cmd});
}

}  // namespace

ControlProfile plan_through_states(const JointState& start, std::span<const JointState> states,
                                   const ManipulatorParams& params, const PlanOptions& options) {
  if (!(options.limits.q1 > 0 && options.limits.q2 > 0 && options.limits.cable > 0)) {
    throw std::invalid_argument("speed limits must be positive");
  }
  ControlProfile profile;
  JointState current = start;
  const double d = params.cable_offset;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const JointState& next = states[i];
    if (auto v = validate_state(next, params); !v.empty()) {
      throw PlanningError(i, fmt::format("waypoint {} violates bounds: {}", i, describe(v)));
    }
    const auto step = controls_between(current, next, ControlState{});
    const auto c0 = cable_lengths(current, d);
    const auto c1 = cable_lengths(next, d);
    if (options.mode == PlanMode::Simultaneous) {
      emit(profile, {step.dq1, step.dq2, c1.left - c0.left, c1.right - c0.right}, next.theta,
           next.theta == current.theta, options);
    } else {
      // extension at the starting angle
      emit(profile, {step.dq1, 0.0, step.dq1, step.dq1}, current.theta, true, options);
      // node drive leaves l1 + l2 and theta unchanged
      emit(profile, {0.0, step.dq2, 0.0, 0.0}, current.theta, true, options);
      // bend at the final lengths
      const JointState extended{next.l1, next.l2, current.theta};
      const auto ce = cable_lengths(extended, d);
      emit(profile, {0.0, 0.0, c1.left - ce.left, c1.right - ce.right}, next.theta, false, options);
    }
    current = next;
  }
  return profile;
}

ControlProfile plan_trajectory(const JointState& start, std::span<const Pose> waypoints,
                               const ManipulatorParams& params, const PlanOptions& options) {
  std::vector<JointState> states;
  states.reserve(waypoints.size());
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    const auto& w = waypoints[i];
    auto s = ik_solve(w, params);
    if (!s) {
      throw PlanningError(i, fmt::format("waypoint {} ({:.6g}, {:.6g}, {:.6g} deg) is not reachable",
                                         i, w.x, w.y, rad_to_deg(w.phi)));
    }
    states.push_back(*s);
  }
  return plan_through_states(start, states, params, options);
}

}  // namespace tapearm
