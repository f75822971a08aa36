#pragma once

// Quasi-static, open-loop execution of actuator rate profiles.
//
// The canonical input is actuator space: rates on q1, q2 and both cables.
// Bend angle and link lengths are always derived from the actuator state.
// Bound violations are recorded with the state, never clamped; only cables
// that no angle can explain abort a run.

#include <string>
#include <vector>

#include "tapearm/model.hpp"
#include "tapearm/planner.hpp"

namespace tapearm {

struct SimState {
  double time = 0.0;
  ControlState control{};
  CablePair cables{};
  JointState joint{};
  Pose pose{};
};

/// Consistent state from actuator coordinates and a bend angle.
SimState make_sim_state(const ControlState& control, double theta, const ManipulatorParams& params,
                        double time = 0.0);

/// Recomputes joint and pose from control and cables. Throws
/// CableInconsistencyError when the cable differential exceeds 4d.
SimState derive(double time, const ControlState& control, const CablePair& cables,
                const ManipulatorParams& params);

/// Cable-sum residual of the cable map: |c_L - (l1 + l2 + 2d sin(theta/2))|
/// with theta taken from the stored joint.
double eq3_residual(const SimState& state, double cable_offset);

struct ConsistencyReport {
  double cable_residual_left = 0.0;
  double cable_residual_right = 0.0;
  double cable_residual = 0.0;  // max of the two magnitudes
  double derivation_residual = 0.0;  // stored joint vs. joint re-derived from actuators
  double joint_limit_margin = 0.0;   // theta_limit - |theta|
  double l1_margin = 0.0;
  double l2_margin = 0.0;
  double total_length_margin = 0.0;  // max_total_length - (l1 + l2)
  double tape_budget_margin = 0.0;   // tape length - (l1 + l2)
};

ConsistencyReport check_consistency(const SimState& state, const ManipulatorParams& params);

struct StepResult {
  SimState state{};
  ViolationList violations;
};

/// Advances actuators by rate * dt and re-derives the joint.
StepResult step(const SimState& state, const RateCommand& command, double dt,
                const ManipulatorParams& params);

enum class CheckKind {
  L1Constant,      // l1 stays at its initial value
  L1Delta,         // final l1 - initial l1 equals the argument
  ThetaConstant,   // theta stays at the argument
  BendPointFixed,  // world position of the node stays fixed
  Target,          // final pose at (x, y)
  Visit,           // some row at (x, y)
  HoldTarget,      // every row at (x, y)
  VisitTheta,      // some row at the argument angle
  Eq3Residual,     // cable residual below tolerance in every row
  NoViolations,    // no bound violated in any row
};

struct Check {
  std::string spec;  // original text
  CheckKind kind = CheckKind::NoViolations;
  double value = 0.0;  // angle (rad) or length (m)
  Point2 point{};
  double tolerance = 0.0;
  bool expect_fail = false;
};

/// Parses `name[:arg][@tol]`, optionally prefixed with `expect_fail:`.
/// Angles accept `deg`/`rad` suffixes and default to degrees.
/// Throws ScenarioError on malformed text.
Check parse_check(const std::string& text);

struct CheckResult {
  std::string spec;
  bool held = false;         // did the condition hold
  bool passed = false;       // held != expect_fail
  bool expect_fail = false;
  double worst = 0.0;        // largest deviation observed
  double tolerance = 0.0;
};

struct Scenario {
  std::string name;
  std::string description;
  ManipulatorParams params{};
  SimState initial{};
  ControlProfile profile{};
  double dt = 0.01;
  std::vector<std::string> checks;
  SpeedLimits limits{};
};

/// Rejects dt <= 0, segment durations that are not integer multiples of dt,
/// commands beyond the speed limits, malformed checks, and initial states
/// whose actuators disagree with the stored joint.
void validate_scenario(const Scenario& scenario);

struct LogRow {
  SimState state{};
  double eq3_residual = 0.0;
  ViolationList violations;
};

struct TrajectoryLog {
  std::string scenario;
  std::vector<LogRow> rows;
  std::vector<CheckResult> checks;
  std::vector<std::size_t> segment_ends;  // row index at the end of each segment

  bool all_passed() const;
};

TrajectoryLog run_scenario(const Scenario& scenario);

std::vector<CheckResult> evaluate_checks(const std::vector<std::string>& checks,
                                         const std::vector<LogRow>& rows);

/// The built-in demonstrations: deploy-and-bend, reach-two-targets,
/// multi-config-same-target, constant-angle-retraction, stationary-bend and
/// its uncoordinated contrast stationary-bend-uncoordinated.
std::vector<Scenario> builtin_scenarios();

/// Throws std::out_of_range for an unknown name.
Scenario builtin_scenario(const std::string& name);

std::vector<std::string> builtin_scenario_names();

}  // namespace tapearm
