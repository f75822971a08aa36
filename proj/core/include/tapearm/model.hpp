#pragma once

// Domain types and closed-form kinematics of the pinched-tape PRP arm.
//
// Frame: base at the origin, link 1 along +y. The bend angle theta is
// measured from the base midline to the link-2 midline, positive toward +x.
// All lengths are meters, all angles radians.

#include <utility>

#include "tapearm/errors.hpp"
#include "tapearm/units.hpp"

namespace tapearm {

struct TapeProperties {
  double elastic_modulus = 200e9;  // Pa, spring steel
  double thickness = 0.2e-3;
  double transverse_radius = 0.014;
  double subtended_angle = 1.75;
  double linear_density = 0.076 / 3.0;  // kg/m, 76 g per 3 m
  double total_tape_length = 7.62;

  /// Throws std::invalid_argument on non-positive fields or t >= R0.
  void validate() const;
};

struct ManipulatorParams {
  TapeProperties tape{};
  double cable_offset = 0.015;
  double theta_limit = deg_to_rad(55.0);
  double l1_min = 0.076;  // node body length
  double l2_min = 0.0;
  double max_total_length = 2.0;
  double base_mass = 0.372;  // housing, reel mount and spools
  double node_mass = 0.163;
  double stowed_length = 0.35;

  void validate() const;
};

struct JointState {
  double l1 = 0.0;
  double l2 = 0.0;
  double theta = 0.0;

  friend bool operator==(const JointState&, const JointState&) = default;
};

/// Actuator coordinates: q1 is cumulative tape extension at the base, q2 the
/// cumulative node displacement toward the tip, measured from the lengths at
/// t = 0.
struct ControlState {
  double q1 = 0.0;
  double q2 = 0.0;
  double l1_0 = 0.0;
  double l2_0 = 0.0;

  friend bool operator==(const ControlState&, const ControlState&) = default;
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double phi = 0.0;

  friend bool operator==(const Pose&, const Pose&) = default;
};

struct CablePair {
  double left = 0.0;
  double right = 0.0;

  friend bool operator==(const CablePair&, const CablePair&) = default;
};

struct LinkLengths {
  double l1 = 0.0;
  double l2 = 0.0;
};

ViolationList validate_state(const JointState& state, const ManipulatorParams& params);

/// Length-only bounds (min lengths, reach, node position); theta is ignored.
ViolationList validate_lengths(double l1, double l2, const ManipulatorParams& params);

void require_valid(const JointState& state, const ManipulatorParams& params);

Pose forward_kinematics_unchecked(const JointState& state);
Pose forward_kinematics(const JointState& state, const ManipulatorParams& params);

LinkLengths link_lengths_unchecked(const ControlState& control);
LinkLengths link_lengths(const ControlState& control, const ManipulatorParams& params);

/// End-effector pose straight from actuator coordinates, evaluated in the
/// combined affine form x = A(theta) q + B(theta) l(0).
Pose fk_from_controls_unchecked(const ControlState& control, double theta);
Pose fk_from_controls(const ControlState& control, double theta, const ManipulatorParams& params);

CablePair cable_lengths(const JointState& state, double cable_offset);

/// Inverse of the cable map. Throws CableInconsistencyError when the
/// differential exceeds 4d.
double theta_from_cables(const CablePair& cables, double cable_offset);

struct MassBudget {
  double base = 0.0;
  double node = 0.0;
  double per_tape = 0.0;
  int tape_count = 2;
  double total = 0.0;
};

/// Throws std::out_of_range when deployed_length is outside [0, tape length].
MassBudget mass_budget(const ManipulatorParams& params, double deployed_length);

/// Fully unspooled tape length over the stowed size.
double extension_ratio(const ManipulatorParams& params, double stowed_length);

}  // namespace tapearm
