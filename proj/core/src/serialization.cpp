#include "tapearm/serialization.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tapearm {

using nlohmann::json;

namespace {

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) it->get_to(out);
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace

void to_json(json& j, const TapeProperties& v) {
  j = {{"elastic_modulus_pa", v.elastic_modulus},   {"thickness_m", v.thickness},
       {"transverse_radius_m", v.transverse_radius}, {"subtended_angle_rad", v.subtended_angle},
       {"linear_density_kg_per_m", v.linear_density}, {"total_tape_length_m", v.total_tape_length}};
}

void from_json(const json& j, TapeProperties& v) {
  read_opt(j, "elastic_modulus_pa", v.elastic_modulus);
  read_opt(j, "thickness_m", v.thickness);
  read_opt(j, "transverse_radius_m", v.transverse_radius);
  read_opt(j, "subtended_angle_rad", v.subtended_angle);
  read_opt(j, "linear_density_kg_per_m", v.linear_density);
  read_opt(j, "total_tape_length_m", v.total_tape_length);
}

void to_json(json& j, const ManipulatorParams& v) {
  j = {{"tape", v.tape},
       {"cable_offset_m", v.cable_offset},
       {"theta_limit_rad", v.theta_limit},
       {"l1_min_m", v.l1_min},
       {"l2_min_m", v.l2_min},
       {"max_total_length_m", v.max_total_length},
       {"base_mass_kg", v.base_mass},
       {"node_mass_kg", v.node_mass},
       {"stowed_length_m", v.stowed_length}};
}

void from_json(const json& j, ManipulatorParams& v) {
  read_opt(j, "tape", v.tape);
  read_opt(j, "cable_offset_m", v.cable_offset);
  read_opt(j, "theta_limit_rad", v.theta_limit);
  read_opt(j, "l1_min_m", v.l1_min);
  read_opt(j, "l2_min_m", v.l2_min);
  read_opt(j, "max_total_length_m", v.max_total_length);
  read_opt(j, "base_mass_kg", v.base_mass);
  read_opt(j, "node_mass_kg", v.node_mass);
  read_opt(j, "stowed_length_m", v.stowed_length);
}

void to_json(json& j, const JointState& v) {
  j = {{"l1_m", v.l1}, {"l2_m", v.l2}, {"theta_rad", v.theta}};
}
void from_json(const json& j, JointState& v) {
  read_opt(j, "l1_m", v.l1);
  read_opt(j, "l2_m", v.l2);
  read_opt(j, "theta_rad", v.theta);
}

void to_json(json& j, const ControlState& v) {
  j = {{"q1_m", v.q1}, {"q2_m", v.q2}, {"l1_0_m", v.l1_0}, {"l2_0_m", v.l2_0}};
}
void from_json(const json& j, ControlState& v) {
  read_opt(j, "q1_m", v.q1);
  read_opt(j, "q2_m", v.q2);
  read_opt(j, "l1_0_m", v.l1_0);
  read_opt(j, "l2_0_m", v.l2_0);
}

void to_json(json& j, const Pose& v) { j = {{"x_m", v.x}, {"y_m", v.y}, {"phi_rad", v.phi}}; }
void from_json(const json& j, Pose& v) {
  read_opt(j, "x_m", v.x);
  read_opt(j, "y_m", v.y);
  read_opt(j, "phi_rad", v.phi);
}

void to_json(json& j, const CablePair& v) { j = {{"cL_m", v.left}, {"cR_m", v.right}}; }
void from_json(const json& j, CablePair& v) {
  read_opt(j, "cL_m", v.left);
  read_opt(j, "cR_m", v.right);
}

void to_json(json& j, const MassBudget& v) {
  j = {{"base_kg", v.base},         {"node_kg", v.node},  {"per_tape_kg", v.per_tape},
       {"tape_count", v.tape_count}, {"total_kg", v.total}};
}

void to_json(json& j, const Violation& v) {
  j = {{"bound", to_string(v.kind)}, {"value", v.value}, {"limit", v.limit}, {"margin", v.margin}};
}

void to_json(json& j, const RateCommand& v) {
  j = {{"q1", v.q1_rate}, {"q2", v.q2_rate}, {"cL", v.left_rate}, {"cR", v.right_rate}};
}
void from_json(const json& j, RateCommand& v) {
  read_opt(j, "q1", v.q1_rate);
  read_opt(j, "q2", v.q2_rate);
  read_opt(j, "cL", v.left_rate);
  read_opt(j, "cR", v.right_rate);
}

void to_json(json& j, const SpeedLimits& v) {
  j = {{"q1", v.q1}, {"q2", v.q2}, {"cable", v.cable}};
}
void from_json(const json& j, SpeedLimits& v) {
  read_opt(j, "q1", v.q1);
  read_opt(j, "q2", v.q2);
  read_opt(j, "cable", v.cable);
}

void to_json(json& j, const ControlProfile& v) {
  j = json::array();
  for (const auto& s : v.segments) j.push_back({{"duration_s", s.duration}, {"rates", s.command}});
}
void from_json(const json& j, ControlProfile& v) {
  v.segments.clear();
  for (const auto& s : j) {
    ProfileSegment seg;
    s.at("duration_s").get_to(seg.duration);
    read_opt(s, "rates", seg.command);
    v.segments.push_back(seg);
  }
}

void to_json(json& j, const MomentBranch& v) {
  j = {{"peak_moment_Nm", v.peak_moment},
       {"peak_angle_rad", v.peak_angle},
       {"propagation_moment_Nm", v.propagation_moment},
       {"decay_angle_rad", v.decay_angle}};
}
void from_json(const json& j, MomentBranch& v) {
  read_opt(j, "peak_moment_Nm", v.peak_moment);
  read_opt(j, "peak_angle_rad", v.peak_angle);
  read_opt(j, "propagation_moment_Nm", v.propagation_moment);
  read_opt(j, "decay_angle_rad", v.decay_angle);
}

void to_json(json& j, const UnpinchedPairModel& v) {
  j = v.branch;
  j["pre_peak_stiffness_Nm_per_rad"] = v.branch.pre_peak_stiffness();
}
void from_json(const json& j, UnpinchedPairModel& v) { j.get_to(v.branch); }

void to_json(json& j, const PinchJointModel& v) {
  j = {{"width_m", v.section.width},
       {"thickness_m", v.section.thickness},
       {"elastic_modulus_pa", v.section.elastic_modulus},
       {"second_moment_m4", v.section.second_moment},
       {"bend_length_m", v.bend_length},
       {"tape_count", v.tape_count},
       {"stiffness_Nm_per_rad", v.stiffness()}};
}

void to_json(json& j, const CheckResult& v) {
  j = {{"check", v.spec},          {"passed", v.passed},       {"held", v.held},
       {"expect_fail", v.expect_fail}, {"worst", v.worst}, {"tolerance", v.tolerance}};
}

json scenario_to_json(const Scenario& s) {
  json initial = s.initial.control;
  initial["theta_rad"] = s.initial.joint.theta;
  initial["cL_m"] = s.initial.cables.left;
  initial["cR_m"] = s.initial.cables.right;
  initial["t_s"] = s.initial.time;
  return {{"name", s.name},         {"description", s.description}, {"params", s.params},
          {"initial", initial},     {"segments", s.profile},        {"dt_s", s.dt},
          {"checks", s.checks},     {"speed_limits", s.limits}};
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  try {
    read_opt(j, "name", s.name);
    read_opt(j, "description", s.description);
    read_opt(j, "params", s.params);
    read_opt(j, "speed_limits", s.limits);
    read_opt(j, "dt_s", s.dt);
    read_opt(j, "checks", s.checks);
    if (auto it = j.find("segments"); it != j.end()) it->get_to(s.profile);

    const json& init = j.at("initial");
    ControlState control;
    init.get_to(control);
    double time = 0.0;
    read_opt(init, "t_s", time);
    const bool has_theta = init.contains("theta_rad");
    const bool has_cables = init.contains("cL_m") && init.contains("cR_m");
    if (has_cables) {
      CablePair cables;
      init.get_to(cables);
      // stored theta (if any) is kept as given so an inconsistent file is caught on load
      s.initial = derive(time, control, cables, s.params);
      if (has_theta) {
        s.initial.joint.theta = init.at("theta_rad").get<double>();
        s.initial.pose = forward_kinematics_unchecked(s.initial.joint);
      }
    } else {
      double theta = 0.0;
      read_opt(init, "theta_rad", theta);
      s.initial = make_sim_state(control, theta, s.params, time);
    }
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario JSON: ") + e.what());
  } catch (const CableInconsistencyError& e) {
    throw ScenarioError(std::string("scenario initial cables: ") + e.what());
  }
  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) { return scenario_from_json(read_file(path)); }

ManipulatorParams load_params(const std::filesystem::path& path) {
  const json j = read_file(path);
  ManipulatorParams p;
  try {
    j.get_to(p);
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  p.validate();
  return p;
}

}  // namespace tapearm
