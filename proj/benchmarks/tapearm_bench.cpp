#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "tapearm/planner.hpp"
#include "tapearm/simulator.hpp"
#include "tapearm/stiffness.hpp"
#include "tapearm/workspace.hpp"

using namespace tapearm;

static void BM_ForwardKinematics(benchmark::State& state) {
  const ManipulatorParams params;
  JointState s{0.4, 0.5, deg_to_rad(22.0)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_kinematics(s, params));
    s.theta = -s.theta;
  }
}
BENCHMARK(BM_ForwardKinematics);

static void BM_FeasibleInterval(benchmark::State& state) {
  const ManipulatorParams params;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ux(-2, 2), uy(0, 2);
  std::vector<Point2> pts(1024);
  for (auto& p : pts) p = {ux(rng), uy(rng)};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(feasible_theta_interval(pts[i++ & 1023], params));
}
BENCHMARK(BM_FeasibleInterval);

static void BM_WorkspaceGrid(benchmark::State& state) {
  const ManipulatorParams params;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compute_grid(params, Bounds{}, n, n / 2, 1));
  state.SetItemsProcessed(state.iterations() * n * (n / 2));
}
BENCHMARK(BM_WorkspaceGrid)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_Scenario(benchmark::State& state) {
  const auto sc = builtin_scenario("multi-config-same-target");
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(sc));
}
BENCHMARK(BM_Scenario)->Unit(benchmark::kMillisecond);

static void BM_CalibrateUnpinched(benchmark::State& state) {
  const auto samples = moment_angle_curve(default_unpinched_model(), 0.0, deg_to_rad(45.0), 91);
  for (auto _ : state) benchmark::DoNotOptimize(calibrate_unpinched(samples));
}
BENCHMARK(BM_CalibrateUnpinched)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
