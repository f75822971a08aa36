#pragma once

// CSV and SVG writers for grids, moment curves and trajectory logs.

#include <filesystem>
#include <string>
#include <vector>

#include "tapearm/simulator.hpp"
#include "tapearm/workspace.hpp"

namespace tapearm {

inline constexpr const char* kLogCsvHeader =
    "t_s,q1_m,q2_m,cL_m,cR_m,l1_m,l2_m,theta_rad,x_m,y_m,eq3_residual_m,violations";
inline constexpr const char* kGridCsvHeader = "x_m,y_m,reachable,min_angle_rad";

std::string log_to_csv(const TrajectoryLog& log);
std::string grid_to_csv(const WorkspaceGrid& grid);

struct ContourSegment {
  Point2 a;
  Point2 b;
};

struct ContourLevel {
  double level = 0.0;  // |min angle| in rad
  std::vector<ContourSegment> segments;
};

/// Marching squares over cell centers on |min_angle|; squares touching an
/// unreachable cell are skipped.
ContourLevel extract_contour(const WorkspaceGrid& grid, double level);

/// Heatmap of |min angle| with contour lines every `contour_step` rad.
std::string grid_to_svg(const WorkspaceGrid& grid, double theta_limit, double contour_step);

/// Schematic overlay of arm configurations: the initial row and every
/// segment end, links drawn along the tape midline with the node marked.
std::string log_to_svg(const TrajectoryLog& log);

/// Throws std::runtime_error when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace tapearm
