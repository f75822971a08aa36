#pragma once

// JSON mapping for the domain types. Keys carry their unit as a suffix.
// On input every key is optional and falls back to the C++ default, so a
// params file only needs the fields it overrides.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "tapearm/model.hpp"
#include "tapearm/planner.hpp"
#include "tapearm/simulator.hpp"
#include "tapearm/stiffness.hpp"

namespace tapearm {

void to_json(nlohmann::json& j, const TapeProperties& v);
void from_json(const nlohmann::json& j, TapeProperties& v);
void to_json(nlohmann::json& j, const ManipulatorParams& v);
void from_json(const nlohmann::json& j, ManipulatorParams& v);
void to_json(nlohmann::json& j, const JointState& v);
void from_json(const nlohmann::json& j, JointState& v);
void to_json(nlohmann::json& j, const ControlState& v);
void from_json(const nlohmann::json& j, ControlState& v);
void to_json(nlohmann::json& j, const Pose& v);
void from_json(const nlohmann::json& j, Pose& v);
void to_json(nlohmann::json& j, const CablePair& v);
void from_json(const nlohmann::json& j, CablePair& v);
void to_json(nlohmann::json& j, const MassBudget& v);
void to_json(nlohmann::json& j, const Violation& v);
void to_json(nlohmann::json& j, const RateCommand& v);
void from_json(const nlohmann::json& j, RateCommand& v);
void to_json(nlohmann::json& j, const SpeedLimits& v);
void from_json(const nlohmann::json& j, SpeedLimits& v);
void to_json(nlohmann::json& j, const ControlProfile& v);
void from_json(const nlohmann::json& j, ControlProfile& v);
void to_json(nlohmann::json& j, const MomentBranch& v);
void from_json(const nlohmann::json& j, MomentBranch& v);
void to_json(nlohmann::json& j, const UnpinchedPairModel& v);
void from_json(const nlohmann::json& j, UnpinchedPairModel& v);
void to_json(nlohmann::json& j, const PinchJointModel& v);
void to_json(nlohmann::json& j, const CheckResult& v);

/// Scenario file: {name, description, params, initial, segments[{duration_s,
/// rates{q1,q2,cL,cR}}], dt_s, checks[], speed_limits}. `initial` holds
/// {q1_m, q2_m, l1_0_m, l2_0_m} plus either theta_rad or explicit cL_m/cR_m.
nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);

/// Throws std::runtime_error when the file cannot be read or parsed.
Scenario load_scenario(const std::filesystem::path& path);
ManipulatorParams load_params(const std::filesystem::path& path);

}  // namespace tapearm
