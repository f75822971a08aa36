#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tapearm {

enum class BoundKind {
  JointLimit,
  LinkOneMin,
  LinkTwoMin,
  TotalLength,
  TapeBudget,
  NodePosition,
};

const char* to_string(BoundKind kind);

/// One violated bound. `margin` is the amount by which the bound is exceeded
/// (always positive for a reported violation).
struct Violation {
  BoundKind kind;
  double value;
  double limit;
  double margin;

  std::string describe() const;
};

using ViolationList = std::vector<Violation>;

std::string describe(const ViolationList& violations);

/// Thrown by checked kinematic maps when the state breaks a bound.
class ConstraintViolationError : public std::runtime_error {
 public:
  explicit ConstraintViolationError(ViolationList violations);
  const ViolationList& violations() const noexcept { return violations_; }

 private:
  ViolationList violations_;
};

/// Cable lengths that no bend angle can produce.
class CableInconsistencyError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PlanningError : public std::runtime_error {
 public:
  PlanningError(std::size_t waypoint, const std::string& what)
      : std::runtime_error(what), waypoint_(waypoint) {}
  std::size_t waypoint() const noexcept { return waypoint_; }

 private:
  std::size_t waypoint_;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tapearm
