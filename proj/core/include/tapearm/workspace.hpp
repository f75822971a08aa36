#pragma once

// Reachability and minimum end-effector angle over the plane.
//
// For a point (x, y) with x > 0 the feasible bend angles form a single closed
// interval: l1 = y - x cot(theta) grows with theta, l2 = x / sin(theta)
// shrinks, and l1 + l2 = y + x tan(theta / 2) grows. Points with x < 0 are
// handled by mirroring. On x = 0 the only feasible orientation is theta = 0.

#include <optional>
#include <vector>

#include "tapearm/model.hpp"

namespace tapearm {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct AngleInterval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double theta) const { return theta >= lo && theta <= hi; }
};

/// |x| at or below this is treated as lying on the axis of symmetry.
inline constexpr double kAxisTolerance = 1e-12;

/// Inverse kinematics at a fixed bend angle. Infeasibility (bounds violated,
/// or theta != 0 on the axis) is std::nullopt rather than an error.
std::optional<JointState> ik_at_theta(Point2 point, double theta, const ManipulatorParams& params);

/// Feasible bend angles at a point, as maximal closed intervals (at most one).
std::vector<AngleInterval> feasible_theta_interval(Point2 point, const ManipulatorParams& params);

/// Signed angle of smallest magnitude at which the point is reachable.
std::optional<double> min_end_effector_angle(Point2 point, const ManipulatorParams& params);

bool reachable(Point2 point, const ManipulatorParams& params);

struct Bounds {
  double x_min = -2.0;
  double x_max = 2.0;
  double y_min = 0.0;
  double y_max = 2.0;
};

struct WorkspaceCell {
  double x = 0.0;
  double y = 0.0;
  bool reachable = false;
  std::optional<double> min_angle;
};

/// Row-major cells (row = y index, column = x index), sampled at cell centers.
struct WorkspaceGrid {
  Bounds bounds{};
  int nx = 0;
  int ny = 0;
  std::vector<WorkspaceCell> cells;

  const WorkspaceCell& at(int ix, int iy) const {
    return cells[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(ix)];
  }
  bool empty() const { return cells.empty(); }
  double reachable_fraction() const;
};

/// Grid with nx by ny cells over the bounds. threads = 0 picks the hardware
/// concurrency; results do not depend on the thread count.
WorkspaceGrid compute_grid(const ManipulatorParams& params, const Bounds& bounds, int nx, int ny,
                           unsigned threads = 0);

/// Grid with square cells of the given size; partial cells at the far edges
/// are dropped. Throws std::out_of_range for a non-positive resolution.
WorkspaceGrid compute_grid(const ManipulatorParams& params, const Bounds& bounds, double resolution,
                           unsigned threads = 0);

}  // namespace tapearm
