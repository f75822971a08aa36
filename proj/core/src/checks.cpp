#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <string_view>

#include <fmt/format.h>

#include "tapearm/simulator.hpp"

namespace tapearm {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view text, const std::string& context) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ScenarioError(fmt::format("check '{}': cannot parse number '{}'", context, text));
  }
  return v;
}

double parse_angle(std::string_view text, const std::string& context) {
  text = trim(text);
  if (text.ends_with("deg")) return deg_to_rad(parse_number(text.substr(0, text.size() - 3), context));
  if (text.ends_with("rad")) return parse_number(text.substr(0, text.size() - 3), context);
  return deg_to_rad(parse_number(text, context));
}

Point2 parse_point(std::string_view text, const std::string& context) {
  text = trim(text);
  if (text.starts_with('(') && text.ends_with(')')) text = text.substr(1, text.size() - 2);
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) {
    throw ScenarioError(fmt::format("check '{}': expected a point (x,y)", context));
  }
  return {parse_number(text.substr(0, comma), context), parse_number(text.substr(comma + 1), context)};
}

double distance(const Pose& p, Point2 q) { return std::hypot(p.x - q.x, p.y - q.y); }

// The node (bend point) sits on the base midline at height l1.
Point2 bend_point(const JointState& j) { return {0.0, j.l1}; }

}  // namespace

Check parse_check(const std::string& text) {
  Check c;
  c.spec = text;
  std::string_view body = trim(text);
  constexpr std::string_view kExpectFail = "expect_fail:";
  if (body.starts_with(kExpectFail)) {
    c.expect_fail = true;
    body.remove_prefix(kExpectFail.size());
  }
  std::optional<double> tolerance;
  if (const auto at = body.rfind('@'); at != std::string_view::npos) {
    // bare tolerances are in the check's own unit (m or rad); angles may carry a suffix
    const auto tol = trim(body.substr(at + 1));
    tolerance = tol.ends_with("deg") || tol.ends_with("rad") ? parse_angle(tol, text)
                                                             : parse_number(tol, text);
    body = body.substr(0, at);
  }
  std::string_view name = body, arg;
  if (const auto colon = body.find(':'); colon != std::string_view::npos) {
    name = body.substr(0, colon);
    arg = body.substr(colon + 1);
  }
  name = trim(name);
  auto need_arg = [&] {
    if (trim(arg).empty()) throw ScenarioError(fmt::format("check '{}' needs an argument", text));
  };
  if (name == "l1_constant") {
    c.kind = CheckKind::L1Constant;
    c.tolerance = 1e-6;
  } else if (name == "l1_delta") {
    need_arg();
    c.kind = CheckKind::L1Delta;
    c.value = parse_number(arg, text);
    c.tolerance = 1e-6;
  } else if (name == "theta_constant") {
    need_arg();
    c.kind = CheckKind::ThetaConstant;
    c.value = parse_angle(arg, text);
    c.tolerance = 1e-6;
  } else if (name == "bend_point_fixed") {
    c.kind = CheckKind::BendPointFixed;
    c.tolerance = 1e-6;
  } else if (name == "target" || name == "visit" || name == "hold_target") {
    need_arg();
    c.kind = name == "target" ? CheckKind::Target
                              : (name == "visit" ? CheckKind::Visit : CheckKind::HoldTarget);
    c.point = parse_point(arg, text);
    c.tolerance = 1e-3;
  } else if (name == "visit_theta") {
    need_arg();
    c.kind = CheckKind::VisitTheta;
    c.value = parse_angle(arg, text);
    c.tolerance = deg_to_rad(0.05);
  } else if (name == "eq3_residual") {
    c.kind = CheckKind::Eq3Residual;
    c.tolerance = 1e-9;
  } else if (name == "no_violations") {
    c.kind = CheckKind::NoViolations;
    c.tolerance = 0.0;
  } else {
    throw ScenarioError(fmt::format("unknown check '{}'", text));
  }
  if (tolerance) {
    if (!(*tolerance >= 0)) throw ScenarioError(fmt::format("check '{}': negative tolerance", text));
    c.tolerance = *tolerance;
  }
  return c;
}

std::vector<CheckResult> evaluate_checks(const std::vector<std::string>& checks,
                                         const std::vector<LogRow>& rows) {
  std::vector<CheckResult> out;
  if (rows.empty()) return out;
  const auto& first = rows.front().state;
  const auto& last = rows.back().state;
  constexpr double inf = std::numeric_limits<double>::infinity();

  auto max_over = [&](auto&& fn) {
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, fn(r));
    return worst;
  };
  auto min_over = [&](auto&& fn) {
    double best = inf;
    for (const auto& r : rows) best = std::min(best, fn(r));
    return best;
  };

  for (const auto& text : checks) {
    const Check c = parse_check(text);
    double worst = 0.0;
    switch (c.kind) {
      case CheckKind::L1Constant:
        worst = max_over([&](const LogRow& r) { return std::abs(r.state.joint.l1 - first.joint.l1); });
        break;
      case CheckKind::L1Delta:
        worst = std::abs((last.joint.l1 - first.joint.l1) - c.value);
        break;
      case CheckKind::ThetaConstant:
        worst = max_over([&](const LogRow& r) { return std::abs(r.state.joint.theta - c.value); });
        break;
      case CheckKind::BendPointFixed: {
        const Point2 origin = bend_point(first.joint);
        worst = max_over([&](const LogRow& r) {
          const Point2 p = bend_point(r.state.joint);
          return std::hypot(p.x - origin.x, p.y - origin.y);
        });
        break;
      }
      case CheckKind::Target:
        worst = distance(last.pose, c.point);
        break;
      case CheckKind::Visit:
        worst = min_over([&](const LogRow& r) { return distance(r.state.pose, c.point); });
        break;
      case CheckKind::HoldTarget:
        worst = max_over([&](const LogRow& r) { return distance(r.state.pose, c.point); });
        break;
      case CheckKind::VisitTheta:
        worst = min_over([&](const LogRow& r) { return std::abs(r.state.joint.theta - c.value); });
        break;
      case CheckKind::Eq3Residual:
        worst = max_over([](const LogRow& r) { return r.eq3_residual; });
        break;
      case CheckKind::NoViolations:
        worst = max_over([](const LogRow& r) { return static_cast<double>(r.violations.size()); });
        break;
    }
    CheckResult res;
    res.spec = text;
    res.worst = worst;
    res.tolerance = c.tolerance;
    res.expect_fail = c.expect_fail;
    res.held = worst <= c.tolerance;
    res.passed = res.held != c.expect_fail;
    out.push_back(res);
  }
  return out;
}

}  // namespace tapearm
