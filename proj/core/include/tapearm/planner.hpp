#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tapearm/model.hpp"
#include "tapearm/workspace.hpp"

namespace tapearm {

/// Actuator rates in m/s: tape extension, node drive, left and right cables.
struct RateCommand {
  double q1_rate = 0.0;
  double q2_rate = 0.0;
  double left_rate = 0.0;
  double right_rate = 0.0;

  friend bool operator==(const RateCommand&, const RateCommand&) = default;
};

struct SpeedLimits {
  double q1 = 0.1;
  double q2 = 0.1;
  double cable = 0.1;

  bool admits(const RateCommand& cmd, double slack = 1e-12) const;
};

struct ProfileSegment {
  double duration = 0.0;
  RateCommand command{};
};

struct ControlProfile {
  std::vector<ProfileSegment> segments;

  double total_duration() const;
  bool empty() const { return segments.empty(); }
};

std::optional<JointState> ik_solve(const Pose& target, const ManipulatorParams& params);

/// `count` configurations reaching the point, theta spread uniformly over the
/// feasible interval starting at its minimum-|theta| end. On the axis only the
/// straight configuration exists, so at most one state is returned there.
std::vector<JointState> ik_enumerate(Point2 point, const ManipulatorParams& params, int count);

struct ControlTransition {
  double dq1 = 0.0;
  double dq2 = 0.0;
  ControlState target{};  // control0 advanced by (dq1, dq2)
};

/// Actuator displacement taking `from` to `to`; control0 must map to `from`.
ControlTransition controls_between(const JointState& from, const JointState& to,
                                   const ControlState& control0);

/// Node drive that cancels tape growth so the bend point stays fixed in the
/// world, with cable rates that hold theta.
RateCommand stationary_bend_rates(double q1_rate);

/// Both cables must track the total length change to hold theta; node motion
/// alone leaves l1 + l2 unchanged.
CablePair constant_theta_cable_rates(double q1_rate, double q2_rate, double theta);

enum class PlanMode {
  Simultaneous,  // all actuators move together, one segment per waypoint
  Sequential,    // extend, then drive the node, then bend
};

struct PlanOptions {
  SpeedLimits limits{};
  PlanMode mode = PlanMode::Simultaneous;
  double dt = 0.0;  // > 0 rounds segment durations up to multiples of dt
};

/// Piecewise-constant-rate profile from `start` through each waypoint.
/// Throws PlanningError naming the first infeasible waypoint.
ControlProfile plan_trajectory(const JointState& start, std::span<const Pose> waypoints,
                               const ManipulatorParams& params, const PlanOptions& options = {});

/// Same, with joint-space waypoints (already solved).
ControlProfile plan_through_states(const JointState& start, std::span<const JointState> states,
                                   const ManipulatorParams& params, const PlanOptions& options = {});

}  // namespace tapearm
