#include "tapearm/model.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>
#include <fmt/format.h>

namespace tapearm {

const char* to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::JointLimit: return "joint_limit";
    case BoundKind::LinkOneMin: return "l1_min";
    case BoundKind::LinkTwoMin: return "l2_min";
    case BoundKind::TotalLength: return "max_total_length";
    case BoundKind::TapeBudget: return "tape_budget";
    case BoundKind::NodePosition: return "node_position";
  }
  return "unknown";
}

std::string Violation::describe() const {
  return fmt::format("{}: value {:.9g} exceeds limit {:.9g} by {:.3g}", to_string(kind), value, limit,
                     margin);
}

std::string describe(const ViolationList& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.describe();
  }
  return out;
}

ConstraintViolationError::ConstraintViolationError(ViolationList violations)
    : std::runtime_error("constraint violation: " + describe(violations)),
      violations_(std::move(violations)) {}

void TapeProperties::validate() const {
  if (!(elastic_modulus > 0 && thickness > 0 && transverse_radius > 0 && subtended_angle > 0 &&
        linear_density > 0 && total_tape_length > 0)) {
    throw std::invalid_argument("tape properties must be strictly positive");
  }
  if (!(thickness < transverse_radius)) {
    throw std::invalid_argument("tape thickness must be below the transverse radius");
  }
}

void ManipulatorParams::validate() const {
  tape.validate();
  if (!(cable_offset > 0)) throw std::invalid_argument("cable offset must be positive");
  if (!(theta_limit > 0 && theta_limit <= kPi / 2)) {
    throw std::invalid_argument("theta limit must lie in (0, pi/2]");
  }
  if (!(l1_min >= 0 && l2_min >= 0)) throw std::invalid_argument("minimum link lengths must be >= 0");
  if (!(max_total_length > 0 && max_total_length <= tape.total_tape_length)) {
    throw std::invalid_argument("max total length must lie in (0, tape length]");
  }
  if (!(base_mass >= 0 && node_mass >= 0)) throw std::invalid_argument("masses must be >= 0");
  if (!(stowed_length > 0)) throw std::invalid_argument("stowed length must be positive");
}

ViolationList validate_lengths(double l1, double l2, const ManipulatorParams& params) {
  ViolationList out;
  if (!(l1 >= params.l1_min)) {
    out.push_back({BoundKind::LinkOneMin, l1, params.l1_min, params.l1_min - l1});
  }
  if (!(l2 >= params.l2_min)) {
    out.push_back({BoundKind::LinkTwoMin, l2, params.l2_min, params.l2_min - l2});
  }
  const double total = l1 + l2;
  if (!(total <= params.max_total_length)) {
    out.push_back({BoundKind::TotalLength, total, params.max_total_length,
                   total - params.max_total_length});
  }
  if (!(total <= params.tape.total_tape_length)) {
    out.push_back({BoundKind::TapeBudget, total, params.tape.total_tape_length,
                   total - params.tape.total_tape_length});
  }
  // node sits at n = l1 on a tape of deployed length L = l1 + l2
  if (l1 < 0) {
    out.push_back({BoundKind::NodePosition, l1, 0.0, -l1});
  } else if (l1 > total) {
    out.push_back({BoundKind::NodePosition, l1, total, l1 - total});
  }
  return out;
}

ViolationList validate_state(const JointState& state, const ManipulatorParams& params) {
  ViolationList out;
  if (!(std::abs(state.theta) <= params.theta_limit)) {
    out.push_back({BoundKind::JointLimit, state.theta, params.theta_limit,
                   std::abs(state.theta) - params.theta_limit});
  }
  auto lengths = validate_lengths(state.l1, state.l2, params);
  out.insert(out.end(), lengths.begin(), lengths.end());
  return out;
}

void require_valid(const JointState& state, const ManipulatorParams& params) {
  if (auto v = validate_state(state, params); !v.empty()) throw ConstraintViolationError(std::move(v));
}

Pose forward_kinematics_unchecked(const JointState& s) {
  return {s.l2 * std::sin(s.theta), s.l1 + s.l2 * std::cos(s.theta), s.theta};
}

Pose forward_kinematics(const JointState& state, const ManipulatorParams& params) {
  require_valid(state, params);
  return forward_kinematics_unchecked(state);
}

LinkLengths link_lengths_unchecked(const ControlState& c) {
  return {c.q1 + c.q2 + c.l1_0, -c.q2 + c.l2_0};
}

LinkLengths link_lengths(const ControlState& control, const ManipulatorParams& params) {
  const auto lengths = link_lengths_unchecked(control);
  if (auto v = validate_lengths(lengths.l1, lengths.l2, params); !v.empty()) {
    throw ConstraintViolationError(std::move(v));
  }
  return lengths;
}

Pose fk_from_controls_unchecked(const ControlState& control, double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  Eigen::Matrix2d control_gain;
  control_gain << 0.0, -s,
                  1.0, 1.0 - c;
  Eigen::Matrix2d initial_gain;
  initial_gain << 0.0, s,
                  1.0, c;
  const Eigen::Vector2d xy = control_gain * Eigen::Vector2d(control.q1, control.q2) +
                             initial_gain * Eigen::Vector2d(control.l1_0, control.l2_0);
  return {xy.x(), xy.y(), theta};
}

Pose fk_from_controls(const ControlState& control, double theta, const ManipulatorParams& params) {
  const auto lengths = link_lengths_unchecked(control);
  require_valid({lengths.l1, lengths.l2, theta}, params);
  return fk_from_controls_unchecked(control, theta);
}

CablePair cable_lengths(const JointState& state, double cable_offset) {
  const double total = state.l1 + state.l2;
  const double shift = 2.0 * cable_offset * std::sin(state.theta / 2.0);
  return {total + shift, total - shift};
}

double theta_from_cables(const CablePair& cables, double cable_offset) {
  if (!(cable_offset > 0)) throw std::invalid_argument("cable offset must be positive");
  const double diff = cables.left - cables.right;
  const double span = 4.0 * cable_offset;
  if (!(std::abs(diff) <= span)) {
    throw CableInconsistencyError(
        fmt::format("cable differential {:.9g} m exceeds 4d = {:.9g} m", diff, span));
  }
  return 2.0 * std::asin(diff / span);
}

MassBudget mass_budget(const ManipulatorParams& params, double deployed_length) {
  if (!(deployed_length >= 0 && deployed_length <= params.tape.total_tape_length)) {
    throw std::out_of_range(fmt::format("tape length {:.9g} m outside [0, {:.9g}] m", deployed_length,
                                        params.tape.total_tape_length));
  }
  MassBudget m;
  m.base = params.base_mass;
  m.node = params.node_mass;
  m.per_tape = params.tape.linear_density * deployed_length;
  m.tape_count = 2;
  m.total = m.base + m.node + m.tape_count * m.per_tape;
  return m;
}

double extension_ratio(const ManipulatorParams& params, double stowed_length) {
  if (!(stowed_length > 0)) throw std::out_of_range("stowed length must be positive");
  return params.tape.total_tape_length / stowed_length;
}

}  // namespace tapearm
