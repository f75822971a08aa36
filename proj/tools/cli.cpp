#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "tapearm/export.hpp"
#include "tapearm/planner.hpp"
#include "tapearm/serialization.hpp"
#include "tapearm/simulator.hpp"
#include "tapearm/stiffness.hpp"
#include "tapearm/workspace.hpp"

namespace tapearm::cli {
namespace {

// Usage-level failure: bad arguments or values that do not parse.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument(fmt::format("'{}' is not a number", text));
  }
  return v;
}

std::string unit_suffix(AngleUnit unit) { return unit == AngleUnit::Degrees ? "deg" : "rad"; }

double to_unit(double rad, AngleUnit unit) {
  return unit == AngleUnit::Degrees ? rad_to_deg(rad) : rad;
}

void print(std::ostream& out, const std::string& key, double v) {
  out << key << '=' << format_number(v) << '\n';
}

ManipulatorParams resolve_params(const CliConfig& cfg) {
  std::filesystem::path path = cfg.params_file;
  if (path.empty()) {
    if (const char* env = std::getenv(kParamsEnvVar); env != nullptr && *env != '\0') path = env;
  }
  if (path.empty()) return {};
  try {
    return load_params(path);
  } catch (const std::invalid_argument& e) {
    throw UsageError(fmt::format("invalid params in {}: {}", path.string(), e.what()));
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

void ensure_out_dir(const CliConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec || !std::filesystem::is_directory(cfg.out_dir)) {
    throw IoError("output directory " + cfg.out_dir.string() + " is not writable");
  }
}

void write_output(const std::filesystem::path& path, const std::string& text, std::ostream& out) {
  try {
    write_text_file(path, text);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
  out << "wrote " << path.string() << '\n';
}

int report_checks(const TrajectoryLog& log, std::ostream& out) {
  for (const auto& c : log.checks) {
    const char* verdict = c.passed ? "PASS" : "FAIL";
    const std::string note = c.expect_fail ? (c.held ? " (expected to fail, but held)"
                                                     : " (expected failure observed)")
                                           : "";
    out << fmt::format("{} {} worst={} tol={}{}\n", verdict, c.spec, format_number(c.worst),
                       format_number(c.tolerance), note);
  }
  const bool ok = log.all_passed();
  out << (ok ? "all checks passed\n" : "some checks failed\n");
  return ok ? kOk : kCheckFailed;
}

int run_and_export(const Scenario& scenario, const CliConfig& cfg, std::ostream& out) {
  ensure_out_dir(cfg);
  const auto log = run_scenario(scenario);
  const std::string stem = scenario.name.empty() ? std::string("scenario") : scenario.name;
  if (cfg.wants_csv()) write_output(cfg.out_dir / (stem + ".csv"), log_to_csv(log), out);
  if (cfg.wants_svg()) write_output(cfg.out_dir / (stem + ".svg"), log_to_svg(log), out);
  out << fmt::format("scenario={} rows={}\n", stem, log.rows.size());
  const auto& last = log.rows.back().state;
  print(out, "final_x_m", last.pose.x);
  print(out, "final_y_m", last.pose.y);
  print(out, "final_theta_" + unit_suffix(cfg.unit), to_unit(last.joint.theta, cfg.unit));
  return report_checks(log, out);
}

std::array<double, 4> parse_bounds(const std::string& text) {
  std::array<double, 4> b{};
  std::stringstream ss(text);
  std::string item;
  std::size_t i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 4) throw UsageError("--bounds takes xmin,xmax,ymin,ymax");
    b[i++] = parse_double(item);
  }
  if (i != 4) throw UsageError("--bounds takes xmin,xmax,ymin,ymax");
  return b;
}

}  // namespace

double parse_angle(const std::string& text, AngleUnit unit) {
  std::string_view t = text;
  if (t.ends_with("deg")) return deg_to_rad(parse_double(t.substr(0, t.size() - 3)));
  if (t.ends_with("rad")) return parse_double(t.substr(0, t.size() - 3));
  const double v = parse_double(t);
  return unit == AngleUnit::Degrees ? deg_to_rad(v) : v;
}

double parse_length(const std::string& text) {
  std::string_view t = text;
  if (t.ends_with("cm")) return parse_double(t.substr(0, t.size() - 2)) / 100.0;
  if (t.ends_with("m")) return parse_double(t.substr(0, t.size() - 1));
  return parse_double(t);
}

std::string format_number(double v) { return fmt::format("{}", v); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kinematics, stiffness, workspace and simulation for the pinched-tape arm", "tapearm"};
  app.require_subcommand(1);

  CliConfig cfg;
  std::string params_file, out_dir = ".", format = "both", unit = "deg";
  app.add_option("--params", params_file, "Manipulator params JSON (default: $TAPEARM_PARAMS)");
  app.add_option("--out", out_dir, "Output directory for exported files");
  app.add_option("--format", format, "Export format")->check(CLI::IsMember({"csv", "svg", "both"}));
  app.add_option("--unit", unit, "Angle unit for bare numbers and output")
      ->check(CLI::IsMember({"deg", "rad"}));

  auto* fk = app.add_subcommand("fk", "Forward kinematics from l1 l2 theta");
  std::string fk_l1, fk_l2, fk_theta;
  fk->add_option("l1", fk_l1)->required();
  fk->add_option("l2", fk_l2)->required();
  fk->add_option("theta", fk_theta)->required();

  auto* ik = app.add_subcommand("ik", "Inverse kinematics for a point");
  std::string ik_x, ik_y, ik_theta;
  int ik_count = 0;
  ik->add_option("x", ik_x)->required();
  ik->add_option("y", ik_y)->required();
  ik->add_option("--theta", ik_theta, "Bend angle; omitted lists the feasible range");
  ik->add_option("--count", ik_count, "Enumerate this many configurations")->check(CLI::PositiveNumber);

  auto* cables = app.add_subcommand("cables", "Cable lengths for l1 l2 theta");
  std::string cb_l1, cb_l2, cb_theta, cb_d;
  cables->add_option("l1", cb_l1)->required();
  cables->add_option("l2", cb_l2)->required();
  cables->add_option("theta", cb_theta)->required();
  cables->add_option("--d", cb_d, "Cable offset (default from params)");

  auto* tfc = app.add_subcommand("theta-from-cables", "Bend angle from cable lengths");
  std::string tc_left, tc_right, tc_d;
  tfc->add_option("cL", tc_left)->required();
  tfc->add_option("cR", tc_right)->required();
  tfc->add_option("--d", tc_d, "Cable offset (default from params)");

  auto* ws = app.add_subcommand("workspace", "Reachability and minimum-angle grid");
  std::string ws_bounds = "-2,2,0,2", ws_contour = "10deg";
  double ws_res = 0.05;
  int ws_nx = 0, ws_ny = 0;
  ws->add_option("--bounds", ws_bounds, "xmin,xmax,ymin,ymax in meters");
  ws->add_option("--resolution", ws_res, "Cell size in meters");
  ws->add_option("--nx", ws_nx, "Cell count along x (with --ny, overrides --resolution)");
  ws->add_option("--ny", ws_ny, "Cell count along y");
  ws->add_option("--contour-step", ws_contour, "Contour spacing");

  auto* st = app.add_subcommand("stiffness", "Bending moments of the tape pair");
  std::optional<double> st_kappa;
  std::string st_theta, st_curve, st_min = "0", st_max = "40deg", st_calibrate, st_bend;
  int st_n = 81;
  bool st_ratio = false;
  st->add_option("--kappa", st_kappa, "Curvature (1/m) for the flattened-strip moment");
  st->add_option("--theta", st_theta, "Angle for pinched and unpinched moments");
  st->add_option("--curve", st_curve, "Export a moment-angle table")
      ->check(CLI::IsMember({"pinched", "unpinched"}));
  st->add_option("--min", st_min, "Curve start angle");
  st->add_option("--max", st_max, "Curve end angle");
  st->add_option("--n", st_n, "Curve sample count")->check(CLI::Range(2, 1000000));
  st->add_flag("--ratio", st_ratio, "Pinched-to-unpinched peak moment ratio");
  st->add_option("--calibrate", st_calibrate, "Fit the unpinched model to a theta_rad,moment_Nm CSV");
  st->add_option("--bend-length", st_bend, "Pinch bend length; default calibrates to 0.055 N*m");

  auto* sim = app.add_subcommand("simulate", "Run a scenario JSON file");
  std::string sim_file;
  sim->add_option("scenario", sim_file)->required();

  auto* demo = app.add_subcommand("demo", "Run a built-in demonstration");
  std::string demo_name;
  demo->add_option("name", demo_name)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    cfg.params_file = params_file;
    cfg.out_dir = out_dir;
    cfg.unit = unit == "rad" ? AngleUnit::Radians : AngleUnit::Degrees;
    cfg.format = format == "csv" ? OutputFormat::Csv
                                 : (format == "svg" ? OutputFormat::Svg : OutputFormat::Both);
    const ManipulatorParams params = resolve_params(cfg);
    const std::string au = unit_suffix(cfg.unit);

    auto angle = [&](const std::string& s) {
      try {
        return parse_angle(s, cfg.unit);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    };
    auto length = [&](const std::string& s) {
      try {
        return parse_length(s);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    };

    if (*fk) {
      const JointState s{length(fk_l1), length(fk_l2), angle(fk_theta)};
      const auto violations = validate_state(s, params);
      if (!violations.empty()) {
        for (const auto& v : violations) err << "violation: " << v.describe() << '\n';
        return kCheckFailed;
      }
      const Pose p = forward_kinematics(s, params);
      print(out, "x_m", p.x);
      print(out, "y_m", p.y);
      print(out, "phi_" + au, to_unit(p.phi, cfg.unit));
      return kOk;
    }

    if (*ik) {
      const Point2 pt{length(ik_x), length(ik_y)};
      if (!ik_theta.empty()) {
        const auto s = ik_at_theta(pt, angle(ik_theta), params);
        if (!s) {
          err << "infeasible: no configuration reaches the point at that angle\n";
          return kCheckFailed;
        }
        print(out, "l1_m", s->l1);
        print(out, "l2_m", s->l2);
        print(out, "theta_" + au, to_unit(s->theta, cfg.unit));
        return kOk;
      }
      const auto intervals = feasible_theta_interval(pt, params);
      if (intervals.empty()) {
        err << "unreachable: point lies outside the workspace\n";
        return kCheckFailed;
      }
      print(out, "theta_lo_" + au, to_unit(intervals.front().lo, cfg.unit));
      print(out, "theta_hi_" + au, to_unit(intervals.front().hi, cfg.unit));
      print(out, "min_angle_" + au, to_unit(*min_end_effector_angle(pt, params), cfg.unit));
      const auto configs = ik_enumerate(pt, params, ik_count > 0 ? ik_count : 1);
      for (std::size_t i = 0; i < configs.size(); ++i) {
        out << fmt::format("config[{}] l1_m={} l2_m={} theta_{}={}\n", i, format_number(configs[i].l1),
                           format_number(configs[i].l2), au,
                           format_number(to_unit(configs[i].theta, cfg.unit)));
      }
      return kOk;
    }

    if (*cables) {
      const double d = cb_d.empty() ? params.cable_offset : length(cb_d);
      if (!(d > 0)) throw UsageError("--d must be positive");
      const JointState s{length(cb_l1), length(cb_l2), angle(cb_theta)};
      const auto c = cable_lengths(s, d);
      print(out, "cL_m", c.left);
      print(out, "cR_m", c.right);
      return kOk;
    }

    if (*tfc) {
      const double d = tc_d.empty() ? params.cable_offset : length(tc_d);
      if (!(d > 0)) throw UsageError("--d must be positive");
      try {
        const double theta = theta_from_cables({length(tc_left), length(tc_right)}, d);
        print(out, "theta_" + au, to_unit(theta, cfg.unit));
      } catch (const CableInconsistencyError& e) {
        err << "inconsistent cables: " << e.what() << '\n';
        return kCheckFailed;
      }
      return kOk;
    }

    if (*ws) {
      const auto b = parse_bounds(ws_bounds);
      const Bounds bounds{b[0], b[1], b[2], b[3]};
      WorkspaceGrid grid;
      if (ws_nx > 0 || ws_ny > 0) {
        if (ws_nx <= 0 || ws_ny <= 0) throw UsageError("--nx and --ny must be given together");
        grid = compute_grid(params, bounds, ws_nx, ws_ny);
      } else {
        if (!(ws_res > 0)) throw UsageError("--resolution must be positive");
        grid = compute_grid(params, bounds, ws_res);
      }
      ensure_out_dir(cfg);
      if (grid.empty()) err << "warning: bounds enclose no cells; writing empty outputs\n";
      if (cfg.wants_csv()) write_output(cfg.out_dir / "workspace.csv", grid_to_csv(grid), out);
      if (cfg.wants_svg()) {
        write_output(cfg.out_dir / "workspace.svg",
                     grid_to_svg(grid, params.theta_limit, angle(ws_contour)), out);
      }
      out << fmt::format("cells={}x{}\n", grid.nx, grid.ny);
      print(out, "reachable_fraction", grid.reachable_fraction());
      return kOk;
    }

    if (*st) {
      bool did_something = false;
      const auto unpinched = default_unpinched_model();
      const PinchJointModel pinched = st_bend.empty() ? default_calibrated_pinch_model(params.tape)
                                                      : make_pinch_model(params.tape, length(st_bend));
      if (st_kappa) {
        print(out, "moment_Nm", flattened_moment(FlattenedSection::from_tape(params.tape), *st_kappa));
        did_something = true;
      }
      if (!st_theta.empty()) {
        const double th = angle(st_theta);
        print(out, "pinched_moment_Nm", pinched_joint_moment(pinched, th));
        print(out, "unpinched_moment_Nm", unpinched_pair_moment(unpinched, th));
        did_something = true;
      }
      if (st_ratio) {
        print(out, "peak_ratio", peak_ratio(pinched, unpinched, unpinched.peak_angle()));
        did_something = true;
      }
      if (!st_curve.empty()) {
        const double lo = angle(st_min), hi = angle(st_max);
        const auto table = st_curve == "pinched" ? moment_angle_curve(pinched, lo, hi, st_n)
                                                 : moment_angle_curve(unpinched, lo, hi, st_n);
        ensure_out_dir(cfg);
        write_output(cfg.out_dir / ("moment_" + st_curve + ".csv"), to_csv(table), out);
        did_something = true;
      }
      if (!st_calibrate.empty()) {
        std::ifstream in(st_calibrate);
        if (!in) throw IoError("cannot open " + st_calibrate);
        std::stringstream buf;
        buf << in.rdbuf();
        std::vector<MomentSample> samples;
        try {
          samples = parse_moment_csv(buf.str());
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        try {
          const auto fit = calibrate_unpinched(samples);
          print(out, "peak_moment_Nm", fit.model.branch.peak_moment);
          print(out, "peak_angle_" + au, to_unit(fit.model.branch.peak_angle, cfg.unit));
          print(out, "propagation_moment_Nm", fit.model.branch.propagation_moment);
          print(out, "decay_angle_" + au, to_unit(fit.model.branch.decay_angle, cfg.unit));
          print(out, "residual_norm_Nm", fit.residual_norm);
        } catch (const FitError& e) {
          err << "fit failed: " << e.what() << '\n';
          return kCheckFailed;
        }
        did_something = true;
      }
      if (!did_something) {
        print(out, "pinch_stiffness_Nm_per_rad", pinched.stiffness());
        print(out, "pinch_bend_length_m", pinched.bend_length);
        print(out, "unpinched_peak_moment_Nm", unpinched.peak_moment());
        print(out, "unpinched_peak_angle_" + au, to_unit(unpinched.peak_angle(), cfg.unit));
      }
      return kOk;
    }

    if (*sim) {
      Scenario scenario;
      try {
        scenario = load_scenario(sim_file);
      } catch (const ScenarioError& e) {
        throw UsageError(e.what());
      } catch (const std::runtime_error& e) {
        throw IoError(e.what());
      }
      if (!params_file.empty()) {
        out << "note: scenario files carry their own params; --params ignored\n";
      }
      return run_and_export(scenario, cfg, out);
    }

    if (*demo) {
      const auto names = builtin_scenario_names();
      if (std::find(names.begin(), names.end(), demo_name) == names.end()) {
        err << "unknown demo '" << demo_name << "'; available:\n";
        for (const auto& n : names) err << "  " << n << '\n';
        return kUsage;
      }
      return run_and_export(builtin_scenario(demo_name), cfg, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}

}  // namespace tapearm::cli
