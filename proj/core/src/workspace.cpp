#include "tapearm/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace tapearm {

std::optional<JointState> ik_at_theta(Point2 point, double theta, const ManipulatorParams& params) {
  if (!(std::abs(theta) <= params.theta_limit)) return std::nullopt;
  JointState s;
  s.theta = theta;
  if (std::abs(point.x) <= kAxisTolerance) {
    if (theta != 0.0) return std::nullopt;
    // straight arm: any split is equivalent, keep l1 short and grow l2
    s.l1 = std::max(params.l1_min, point.y - params.max_total_length + params.l1_min);
    s.l2 = point.y - s.l1;
  } else {
    if (theta == 0.0) return std::nullopt;
    s.l2 = point.x / std::sin(theta);
    s.l1 = point.y - s.l2 * std::cos(theta);
  }
  if (!validate_state(s, params).empty()) return std::nullopt;
  return s;
}

namespace {

// Interval for x > 0 before endpoint refinement.
std::optional<AngleInterval> positive_side_interval(double x, double y, const ManipulatorParams& p) {
  // l1 >= l1_min  <=>  cot(theta) <= (y - l1_min) / x
  const double lo = std::atan2(x, y - p.l1_min);
  double hi = p.theta_limit;
  // l2 >= l2_min  <=>  sin(theta) <= x / l2_min
  if (p.l2_min > 0 && x < p.l2_min) hi = std::min(hi, std::asin(x / p.l2_min));
  // l1 + l2 <= reach  <=>  tan(theta / 2) <= (reach - y) / x
  const double reach = std::min(p.max_total_length, p.tape.total_tape_length);
  if (reach - y < 0) return std::nullopt;
  hi = std::min(hi, 2.0 * std::atan((reach - y) / x));
  if (!(lo <= hi)) return std::nullopt;
  return AngleInterval{lo, hi};
}

// Closed-form endpoints can land an ulp outside a bound; walk them inward
// until the point-wise inverse accepts them.
std::optional<AngleInterval> refine(Point2 point, AngleInterval iv, const ManipulatorParams& p) {
  constexpr int kMaxNudges = 64;
  const double inf = std::numeric_limits<double>::infinity();
  int k = 0;
  while (!ik_at_theta(point, iv.lo, p) && k++ < kMaxNudges) iv.lo = std::nextafter(iv.lo, inf);
  k = 0;
  while (!ik_at_theta(point, iv.hi, p) && k++ < kMaxNudges) iv.hi = std::nextafter(iv.hi, -inf);
  if (!(iv.lo <= iv.hi) || !ik_at_theta(point, iv.lo, p) || !ik_at_theta(point, iv.hi, p)) {
    return std::nullopt;
  }
  return iv;
}

}  // namespace

std::vector<AngleInterval> feasible_theta_interval(Point2 point, const ManipulatorParams& params) {
  if (std::abs(point.x) <= kAxisTolerance) {
    if (ik_at_theta(point, 0.0, params)) return {AngleInterval{0.0, 0.0}};
    return {};
  }
  const double ax = std::abs(point.x);
  auto iv = positive_side_interval(ax, point.y, params);
  if (!iv) return {};
  auto refined = refine({ax, point.y}, *iv, params);
  if (!refined) return {};
  if (point.x < 0) return {AngleInterval{-refined->hi, -refined->lo}};
  return {*refined};
}

std::optional<double> min_end_effector_angle(Point2 point, const ManipulatorParams& params) {
  const auto intervals = feasible_theta_interval(point, params);
  if (intervals.empty()) return std::nullopt;
  std::optional<double> best;
  for (const auto& iv : intervals) {
    const double candidate = (iv.lo <= 0 && iv.hi >= 0) ? 0.0 : (iv.lo > 0 ? iv.lo : iv.hi);
    if (!best || std::abs(candidate) < std::abs(*best)) best = candidate;
  }
  return best;
}

bool reachable(Point2 point, const ManipulatorParams& params) {
  return !feasible_theta_interval(point, params).empty();
}

double WorkspaceGrid::reachable_fraction() const {
  if (cells.empty()) return 0.0;
  const auto n = std::count_if(cells.begin(), cells.end(), [](const auto& c) { return c.reachable; });
  return static_cast<double>(n) / static_cast<double>(cells.size());
}

namespace {

// Cell centers computed from the nearer edge so that symmetric bounds give
// exactly mirrored coordinates.
double center(double lo, double hi, int n, int i) {
  const double step = (hi - lo) / n;
  if (2 * i + 1 == n) return 0.5 * (lo + hi);
  if (2 * i + 1 < n) return lo + (i + 0.5) * step;
  return hi - ((n - 1 - i) + 0.5) * step;
}

}  // namespace

WorkspaceGrid compute_grid(const ManipulatorParams& params, const Bounds& bounds, int nx, int ny,
                           unsigned threads) {
  WorkspaceGrid grid;
  grid.bounds = bounds;
  if (nx <= 0 || ny <= 0 || !(bounds.x_max > bounds.x_min) || !(bounds.y_max > bounds.y_min)) {
    return grid;
  }
  grid.nx = nx;
  grid.ny = ny;
  grid.cells.resize(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));

  auto eval_row = [&](int iy) {
    const double y = center(bounds.y_min, bounds.y_max, ny, iy);
    for (int ix = 0; ix < nx; ++ix) {
      auto& cell = grid.cells[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) +
                              static_cast<std::size_t>(ix)];
      cell.x = center(bounds.x_min, bounds.x_max, nx, ix);
      cell.y = y;
      cell.min_angle = min_end_effector_angle({cell.x, cell.y}, params);
      cell.reachable = cell.min_angle.has_value();
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(ny));
  if (workers <= 1) {
    for (int iy = 0; iy < ny; ++iy) eval_row(iy);
    return grid;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int iy = static_cast<int>(w); iy < ny; iy += static_cast<int>(workers)) eval_row(iy);
      });
    }
  }
  return grid;
}

WorkspaceGrid compute_grid(const ManipulatorParams& params, const Bounds& bounds, double resolution,
                           unsigned threads) {
  if (!(resolution > 0)) throw std::out_of_range("grid resolution must be positive");
  auto count = [&](double lo, double hi) {
    if (!(hi > lo)) return 0;
    return static_cast<int>(std::floor((hi - lo) / resolution + 1e-9));
  };
  const int nx = count(bounds.x_min, bounds.x_max);
  const int ny = count(bounds.y_min, bounds.y_max);
  Bounds snapped = bounds;
  snapped.x_max = bounds.x_min + nx * resolution;
  snapped.y_max = bounds.y_min + ny * resolution;
  // keep x symmetric when the request was symmetric
  if (bounds.x_min == -bounds.x_max) {
    snapped.x_min = -0.5 * nx * resolution;
    snapped.x_max = 0.5 * nx * resolution;
  }
  return compute_grid(params, snapped, nx, ny, threads);
}

}  // namespace tapearm
