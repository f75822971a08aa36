#include "tapearm/export.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

namespace tapearm {

std::string log_to_csv(const TrajectoryLog& log) {
  std::string out = kLogCsvHeader;
  out += '\n';
  for (const auto& row : log.rows) {
    const auto& s = row.state;
    std::string violations;
    for (const auto& v : row.violations) {
      if (!violations.empty()) violations += ';';
      violations += to_string(v.kind);
    }
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n",
                       s.time, s.control.q1, s.control.q2, s.cables.left, s.cables.right, s.joint.l1,
                       s.joint.l2, s.joint.theta, s.pose.x, s.pose.y, row.eq3_residual, violations);
  }
  return out;
}

std::string grid_to_csv(const WorkspaceGrid& grid) {
  std::string out = kGridCsvHeader;
  out += '\n';
  for (const auto& c : grid.cells) {
    if (c.min_angle) {
      out += fmt::format("{:.17g},{:.17g},1,{:.17g}\n", c.x, c.y, *c.min_angle);
    } else {
      out += fmt::format("{:.17g},{:.17g},0,\n", c.x, c.y);
    }
  }
  return out;
}

ContourLevel extract_contour(const WorkspaceGrid& grid, double level) {
  ContourLevel out;
  out.level = level;
  if (grid.nx < 2 || grid.ny < 2) return out;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  auto value = [&](int ix, int iy) {
    const auto& c = grid.at(ix, iy);
    return c.min_angle ? std::abs(*c.min_angle) : nan;
  };
  auto point = [&](int ix, int iy) { return Point2{grid.at(ix, iy).x, grid.at(ix, iy).y}; };

  for (int iy = 0; iy + 1 < grid.ny; ++iy) {
    for (int ix = 0; ix + 1 < grid.nx; ++ix) {
      // corners counter-clockwise from (ix, iy)
      const std::array<std::pair<int, int>, 4> idx{{{ix, iy}, {ix + 1, iy}, {ix + 1, iy + 1}, {ix, iy + 1}}};
      std::array<double, 4> v{};
      bool skip = false;
      for (int k = 0; k < 4; ++k) {
        v[k] = value(idx[k].first, idx[k].second);
        skip = skip || std::isnan(v[k]);
      }
      if (skip) continue;
      std::vector<Point2> hits;
      for (int k = 0; k < 4; ++k) {
        const int m = (k + 1) % 4;
        const bool above_k = v[k] >= level, above_m = v[m] >= level;
        if (above_k == above_m) continue;
        const double t = (level - v[k]) / (v[m] - v[k]);
        const Point2 pa = point(idx[k].first, idx[k].second);
        const Point2 pb = point(idx[m].first, idx[m].second);
        hits.push_back({pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)});
      }
      if (hits.size() == 2) {
        out.segments.push_back({hits[0], hits[1]});
      } else if (hits.size() == 4) {
        // saddle: pair by the center value
        const double center = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        if ((center >= level) == (v[0] >= level)) {
          out.segments.push_back({hits[0], hits[3]});
          out.segments.push_back({hits[1], hits[2]});
        } else {
          out.segments.push_back({hits[0], hits[1]});
          out.segments.push_back({hits[2], hits[3]});
        }
      }
    }
  }
  return out;
}

namespace {

struct Viewport {
  double x_min, y_max, scale;
  double px(double x) const { return (x - x_min) * scale; }
  double py(double y) const { return (y_max - y) * scale; }
};

std::string color_for(double fraction) {
  fraction = std::clamp(fraction, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(40 + 215 * fraction));
  const int g = static_cast<int>(std::lround(90 + 80 * (1.0 - std::abs(2 * fraction - 1))));
  const int b = static_cast<int>(std::lround(255 - 215 * fraction));
  return fmt::format("#{:02x}{:02x}{:02x}", r, g, b);
}

}  // namespace

std::string grid_to_svg(const WorkspaceGrid& grid, double theta_limit, double contour_step) {
  const auto& b = grid.bounds;
  const double width_m = std::max(b.x_max - b.x_min, 1e-9);
  const double height_m = std::max(b.y_max - b.y_min, 1e-9);
  const double scale = 600.0 / std::max(width_m, height_m);
  const Viewport vp{b.x_min, b.y_max, scale};
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.1f}\" height=\"{:.1f}\" "
      "viewBox=\"0 0 {:.1f} {:.1f}\">\n",
      width_m * scale, height_m * scale, width_m * scale, height_m * scale);
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  if (!grid.empty()) {
    const double dx = (b.x_max - b.x_min) / grid.nx * scale;
    const double dy = (b.y_max - b.y_min) / grid.ny * scale;
    out += "<g id=\"cells\" stroke=\"none\">\n";
    for (const auto& c : grid.cells) {
      const std::string fill =
          c.min_angle ? color_for(std::abs(*c.min_angle) / theta_limit) : std::string("#e6e6e6");
      out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n",
                         vp.px(c.x) - dx / 2, vp.py(c.y) - dy / 2, dx, dy, fill);
    }
    out += "</g>\n";
    if (contour_step > 0) {
      out += "<g id=\"contours\" stroke=\"#000000\" stroke-width=\"1\" fill=\"none\">\n";
      for (double level = contour_step; level < theta_limit; level += contour_step) {
        const auto contour = extract_contour(grid, level);
        if (contour.segments.empty()) continue;
        std::string d;
        for (const auto& s : contour.segments) {
          d += fmt::format("M{:.2f} {:.2f}L{:.2f} {:.2f}", vp.px(s.a.x), vp.py(s.a.y), vp.px(s.b.x),
                           vp.py(s.b.y));
        }
        out += fmt::format("<path data-level-deg=\"{:.1f}\" d=\"{}\"/>\n", rad_to_deg(level), d);
      }
      out += "</g>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

std::string log_to_svg(const TrajectoryLog& log) {
  std::vector<std::size_t> picks{0};
  for (auto i : log.segment_ends) picks.push_back(i);
  double x_lo = -0.1, x_hi = 0.1, y_hi = 0.1;
  for (auto i : picks) {
    if (i >= log.rows.size()) continue;
    const auto& s = log.rows[i].state;
    x_lo = std::min(x_lo, s.pose.x);
    x_hi = std::max(x_hi, s.pose.x);
    y_hi = std::max({y_hi, s.pose.y, s.joint.l1});
  }
  const double pad = 0.05;
  const double width_m = x_hi - x_lo + 2 * pad;
  const double height_m = y_hi + 2 * pad;
  const double scale = 600.0 / std::max(width_m, height_m);
  const Viewport vp{x_lo - pad, y_hi + pad, scale};
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.1f}\" height=\"{:.1f}\">\n",
      width_m * scale, height_m * scale);
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  out += fmt::format("<title>{}</title>\n", log.scenario);
  for (std::size_t k = 0; k < picks.size(); ++k) {
    if (picks[k] >= log.rows.size()) continue;
    const auto& s = log.rows[picks[k]].state;
    const double shade = picks.size() > 1 ? static_cast<double>(k) / (picks.size() - 1) : 1.0;
    const std::string color = color_for(shade);
    out += fmt::format(
        "<polyline points=\"{:.2f},{:.2f} {:.2f},{:.2f} {:.2f},{:.2f}\" stroke=\"{}\" "
        "stroke-width=\"3\" fill=\"none\"/>\n",
        vp.px(0.0), vp.py(0.0), vp.px(0.0), vp.py(s.joint.l1), vp.px(s.pose.x), vp.py(s.pose.y), color);
    out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"5\" fill=\"{}\"/>\n", vp.px(0.0),
                       vp.py(s.joint.l1), color);
  }
  out += "</svg>\n";
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace tapearm
