#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "tapearm/export.hpp"
#include "tapearm/serialization.hpp"
#include "tapearm/stiffness.hpp"
#include "tapearm/workspace.hpp"

using namespace tapearm;
using tapearm::cli::format_number;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("tapearm_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, FormatNumberRoundTrips) {
  for (double v : {0.1, 1.0103527618041008, -3.2666666666666667e-3, 1e-300, 0.0}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

TEST(Cli, ParseAngleAndLength) {
  EXPECT_EQ(cli::parse_angle("30", cli::AngleUnit::Degrees), deg_to_rad(30.0));
  EXPECT_EQ(cli::parse_angle("30deg", cli::AngleUnit::Radians), deg_to_rad(30.0));
  EXPECT_EQ(cli::parse_angle("0.5rad", cli::AngleUnit::Degrees), 0.5);
  EXPECT_EQ(cli::parse_length("25.4cm"), 0.254);
  EXPECT_EQ(cli::parse_length("0.3m"), 0.3);
  EXPECT_THROW(cli::parse_angle("abc", cli::AngleUnit::Degrees), std::invalid_argument);
}

TEST(Cli, FkMatchesLibrary) {
  const auto r = run({"fk", "0.5", "0.5", "30deg"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Pose p = forward_kinematics({0.5, 0.5, deg_to_rad(30.0)}, ManipulatorParams{});
  EXPECT_EQ(r.out, "x_m=" + format_number(p.x) + "\ny_m=" + format_number(p.y) + "\nphi_deg=" +
                       format_number(rad_to_deg(p.phi)) + "\n");
}

TEST(Cli, FkJointLimitFails) {
  const auto r = run({"fk", "0.5", "0.5", "80deg"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("joint_limit"), std::string::npos);
}

TEST(Cli, RadianUnit) {
  const auto r = run({"--unit", "rad", "fk", "0.5", "0.5", "0.5"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("phi_rad=0.5\n"), std::string::npos);
}

TEST(Cli, IkAtAngle) {
  const auto r = run({"ik", "0.076", "0.686", "--theta", "10deg"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto s = ik_at_theta({0.076, 0.686}, deg_to_rad(10.0), ManipulatorParams{});
  EXPECT_NE(r.out.find("l1_m=" + format_number(s->l1) + "\n"), std::string::npos);
  EXPECT_NE(r.out.find("l2_m=" + format_number(s->l2) + "\n"), std::string::npos);
  EXPECT_NEAR(s->l1, 0.254, 0.005);
  EXPECT_NEAR(s->l2, 0.438, 0.005);
  EXPECT_EQ(run({"ik", "0.5", "0.1", "--theta", "5"}).code, 1);
  EXPECT_EQ(run({"ik", "3", "3"}).code, 1);
}

TEST(Cli, IkRange) {
  const auto r = run({"ik", "0.076", "0.686", "--count", "3"});
  ASSERT_EQ(r.code, 0);
  const auto m = min_end_effector_angle({0.076, 0.686}, ManipulatorParams{});
  EXPECT_NE(r.out.find("min_angle_deg=" + format_number(rad_to_deg(*m))), std::string::npos);
  EXPECT_NE(r.out.find("config[2]"), std::string::npos);
}

TEST(Cli, Cables) {
  const auto r = run({"cables", "0.5", "0.5", "30deg", "--d", "0.02"});
  ASSERT_EQ(r.code, 0);
  const auto c = cable_lengths({0.5, 0.5, deg_to_rad(30.0)}, 0.02);
  EXPECT_EQ(r.out, "cL_m=" + format_number(c.left) + "\ncR_m=" + format_number(c.right) + "\n");
  EXPECT_EQ(r.out.substr(5, 8), "1.010352");
}

TEST(Cli, ThetaFromCables) {
  const auto r = run({"--unit", "rad", "theta-from-cables", "0.605", "0.595", "--d", "0.015"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "theta_rad=" + format_number(theta_from_cables({0.605, 0.595}, 0.015)) + "\n");
  EXPECT_EQ(run({"theta-from-cables", "0.9", "0.5"}).code, 1);
}

TEST(Cli, Stiffness) {
  auto r = run({"stiffness", "--kappa", "0"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "moment_Nm=0\n");
  r = run({"stiffness", "--kappa", "1"});
  EXPECT_EQ(r.out, "moment_Nm=" + format_number(flattened_moment(FlattenedSection::from_tape({}), 1.0)) + "\n");
  r = run({"stiffness", "--ratio"});
  EXPECT_EQ(r.out, "peak_ratio=" +
                       format_number(peak_ratio(default_calibrated_pinch_model(), default_unpinched_model(),
                                                deg_to_rad(10.0))) +
                       "\n");
  r = run({"stiffness", "--theta", "10", "--bend-length", "0.01"});
  EXPECT_NE(r.out.find("pinched_moment_Nm=" +
                       format_number(pinched_joint_moment(make_pinch_model({}, 0.01), deg_to_rad(10.0)))),
            std::string::npos);
}

TEST(Cli, StiffnessCurveAndCalibrate) {
  const auto dir = scratch("stiff");
  auto r = run({"--out", dir.string(), "stiffness", "--curve", "unpinched", "--min", "0", "--max", "45",
                "--n", "91"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = dir / "moment_unpinched.csv";
  EXPECT_EQ(slurp(csv), to_csv(moment_angle_curve(default_unpinched_model(), 0, deg_to_rad(45.0), 91)));
  r = run({"stiffness", "--calibrate", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("peak_moment_Nm=0.65"), std::string::npos);
  EXPECT_EQ(run({"stiffness", "--calibrate", "/nonexistent.csv"}).code, 3);
}

TEST(Cli, WorkspaceWritesFiles) {
  const auto dir = scratch("ws");
  const auto r = run({"--out", dir.string(), "workspace", "--resolution", "0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto g = compute_grid(ManipulatorParams{}, Bounds{}, 0.1);
  EXPECT_EQ(slurp(dir / "workspace.csv"), grid_to_csv(g));
  EXPECT_TRUE(std::filesystem::exists(dir / "workspace.svg"));
  EXPECT_NE(r.out.find("reachable_fraction=" + format_number(g.reachable_fraction())), std::string::npos);
}

TEST(Cli, WorkspaceZeroAreaWarns) {
  const auto dir = scratch("ws0");
  const auto r = run({"--out", dir.string(), "--format", "csv", "workspace", "--bounds", "0,0,0,1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_EQ(slurp(dir / "workspace.csv"), std::string(kGridCsvHeader) + "\n");
  EXPECT_FALSE(std::filesystem::exists(dir / "workspace.svg"));
}

TEST(Cli, WorkspaceUnwritable) {
  EXPECT_EQ(run({"--out", "/proc/tapearm_nope", "workspace", "--resolution", "0.5"}).code, 3);
}

TEST(Cli, DemoPassesAndWrites) {
  const auto dir = scratch("demo");
  const auto r = run({"--out", dir.string(), "demo", "stationary-bend"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(slurp(dir / "stationary-bend.csv"), log_to_csv(run_scenario(builtin_scenario("stationary-bend"))));
  EXPECT_TRUE(std::filesystem::exists(dir / "stationary-bend.svg"));
  EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
}

TEST(Cli, DemoExpectedFailure) {
  const auto dir = scratch("demo2");
  const auto r = run({"--out", dir.string(), "demo", "stationary-bend-uncoordinated"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS expect_fail:l1_constant"), std::string::npos);
  EXPECT_NE(r.out.find("expected failure observed"), std::string::npos);
}

TEST(Cli, UnknownDemo) {
  const auto r = run({"demo", "nosuch"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("stationary-bend"), std::string::npos);
}

TEST(Cli, SimulateFile) {
  const auto dir = scratch("sim");
  auto sc = builtin_scenario("constant-angle-retraction");
  sc.name = "from-file";
  std::ofstream(dir / "sc.json") << scenario_to_json(sc).dump(2);
  auto r = run({"--out", dir.string(), "simulate", (dir / "sc.json").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "from-file.csv"));
  // failing check gives exit 1
  sc.checks = {"l1_delta:0.3"};
  std::ofstream(dir / "fail.json") << scenario_to_json(sc).dump();
  EXPECT_EQ(run({"--out", dir.string(), "simulate", (dir / "fail.json").string()}).code, 1);
  EXPECT_EQ(run({"simulate", (dir / "missing.json").string()}).code, 3);
  std::ofstream(dir / "bad.json") << R"({"initial": {"l1_0_m": 0.3, "l2_0_m": 0.3}, "dt_s": -1})";
  EXPECT_EQ(run({"simulate", (dir / "bad.json").string()}).code, 2);
}

TEST(Cli, ParamsFlagAndEnvironment) {
  const auto dir = scratch("params");
  std::ofstream(dir / "p.json") << R"({"cable_offset_m": 0.02})";
  const auto expected = "cL_m=" + format_number(cable_lengths({0.5, 0.5, deg_to_rad(30.0)}, 0.02).left);
  auto r = run({"--params", (dir / "p.json").string(), "cables", "0.5", "0.5", "30"});
  EXPECT_EQ(r.out.substr(0, expected.size()), expected);
  ::setenv(cli::kParamsEnvVar, (dir / "p.json").string().c_str(), 1);
  r = run({"cables", "0.5", "0.5", "30"});
  ::unsetenv(cli::kParamsEnvVar);
  EXPECT_EQ(r.out.substr(0, expected.size()), expected);
  EXPECT_EQ(run({"--params", (dir / "none.json").string(), "fk", "0.3", "0.3", "0"}).code, 3);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"fk", "0.5"}).code, 2);
  EXPECT_EQ(run({"fk", "a", "b", "c"}).code, 2);
  EXPECT_EQ(run({"--format", "png", "fk", "0.5", "0.5", "0"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}
