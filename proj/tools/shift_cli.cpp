#include "shift/config.hpp"
#include "shift/io.hpp"
#include "shift/sim.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace shift;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitConfig = 2;

Config load_config(const std::string& path, const std::vector<std::string>& overrides) {
  Config cfg = path.empty() ? Config{} : Config::parse_file(path);
  for (const auto& assignment : overrides) cfg.apply_override(assignment);
  return cfg;
}

int cmd_fit_surface(const std::string& cloud_path, int degree, int ctrl_u, int ctrl_v,
                    double resolution, const std::string& interp,
                    const std::string& out_path) {
  const PointCloud cloud = read_cloud(cloud_path);
  SurfaceFitParams params;
  params.degree = degree;
  params.num_ctrl_u = ctrl_u;
  params.num_ctrl_v = ctrl_v;
  const SurfaceFit fit = fit_surface(cloud, params);
  std::cerr << "fit: " << cloud.size() << " points, rms residual " << fit.rms_residual
            << " m\n";
  const Interpolation kind =
      interp == "bicubic" ? Interpolation::kBicubic : Interpolation::kBilinear;
  const ElevationMap map = extract_elevation(fit.surface, resolution, kind);
  write_elevation(map, out_path);
  std::cerr << "elevation: " << map.rows() << "x" << map.cols() << " -> " << out_path
            << "\n";
  return kExitOk;
}

int cmd_plan(const Config& cfg, std::uint64_t seed, const std::string& out_path) {
  const ScenarioSpec spec = ScenarioSpec::from_config(cfg);
  const SimConfig sim = SimConfig::from_config(cfg);
  const ScenarioData data = generate_scenario(spec, seed);

  const SurfaceFit fit = fit_surface(data.cloud, sim.fit);
  LandmarkGrid grid = grid_landmarks(fit.surface, sim.landmark_spacing);
  grid = apply_offset(grid, sim.z_offset);
  const CoveragePath cpath = boustrophedon_order(grid, sim.transpose_rows);
  const TimedPath timed = allocate_velocities(cpath, data.semantic, sim.coverage);
  write_text_file(out_path, timed_path_to_jsonl(timed));
  std::cerr << "plan: " << timed.size() << " waypoints -> " << out_path << "\n";
  return kExitOk;
}

int run_and_write(const Config& cfg, std::uint64_t seed, const std::string& out_path,
                  const std::string& metrics_path, const std::string& coverage_csv,
                  bool baseline) {
  const ScenarioSpec spec = ScenarioSpec::from_config(cfg);
  SimConfig sim = SimConfig::from_config(cfg);
  const ScenarioData data = generate_scenario(spec, seed);
  const RunResult result = baseline ? run_baseline(data, sim) : run_shift(data, sim);
  write_text_file(out_path, trajectory_log(result));
  if (!metrics_path.empty()) write_text_file(metrics_path, metrics_to_json(result.metrics));
  if (!coverage_csv.empty()) write_text_file(coverage_csv, ledger_to_csv(result.ledger));
  std::cerr << (baseline ? "baseline" : "shift") << ": " << result.trajectory.size()
            << " waypoints, completeness " << result.metrics.completeness_pct
            << "%, uniformity " << result.metrics.uniformity_pct << "%\n";
  return result.infeasible ? kExitInfeasible : kExitOk;
}

int cmd_metrics(const Config& cfg, std::uint64_t seed, const std::string& run_path,
                const std::string& out_path) {
  const ScenarioSpec spec = ScenarioSpec::from_config(cfg);
  SimConfig sim = SimConfig::from_config(cfg);
  const ScenarioData data = generate_scenario(spec, seed);
  const TimedPath traj = timed_path_from_jsonl(read_text_file(run_path));

  CoverageLedger ledger = CoverageLedger::like(data.semantic);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    mark_visit(ledger, traj.points[i].position);
    double occupancy = traj.points[i].t_dwell;
    if (i > 0) {
      const double ds = (traj.points[i].position - traj.points[i - 1].position).norm();
      occupancy += 0.5 * ds / std::max(traj.points[i - 1].v, 1e-9);
    }
    if (i + 1 < traj.size()) {
      const double ds = (traj.points[i + 1].position - traj.points[i].position).norm();
      occupancy += 0.5 * ds / std::max(traj.points[i].v, 1e-9);
    }
    deposit_coverage(ledger, traj.points[i].position, occupancy, sim.coverage);
  }
  MetricsParams params = sim.metrics;
  params.coverage = sim.coverage;
  const MetricsReport report = compute_metrics(ledger, traj, data, params);
  write_text_file(out_path, metrics_to_json(report));
  std::cerr << "metrics -> " << out_path << "\n";
  return kExitOk;
}

int cmd_bench(const Config& cfg, double density, int trials, std::uint64_t seed,
              const std::string& out_path) {
  const SimConfig sim = SimConfig::from_config(cfg);
  const auto results = bench_local(density, trials, seed, sim);
  write_text_file(out_path, bench_to_csv(results));
  std::cerr << "bench: " << trials << " trials at density " << density << " -> "
            << out_path << "\n";
  return kExitOk;
}

int cmd_dump_tree(const std::string& cloud_path, const std::string& out_path) {
  const PointCloud cloud = read_cloud(cloud_path);
  IkdTree tree;
  tree.insert(cloud.points);
  write_text_file(out_path, tree_dump_to_json(tree));
  std::cerr << "dump-tree: " << tree.node_count() << " nodes -> " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SHIFT coverage planning toolkit"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, metrics_path, coverage_csv, cloud_path, run_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  int degree = 3, ctrl_u = 10, ctrl_v = 10, trials = 20;
  double resolution = 0.25, density = 0.3;
  std::string interp = "bilinear";

  auto* fit = app.add_subcommand("fit-surface", "Fit a surface and export an elevation map");
  fit->add_option("--cloud", cloud_path, "Point cloud CSV or PLY")->required();
  fit->add_option("--degree", degree, "Spline degree (>= 3)");
  fit->add_option("--ctrl-u", ctrl_u, "Control points along u");
  fit->add_option("--ctrl-v", ctrl_v, "Control points along v");
  fit->add_option("--resolution", resolution, "Elevation grid resolution, m");
  fit->add_option("--interp", interp, "bilinear or bicubic");
  fit->add_option("--out", out_path, "Elevation JSON output")->required();

  auto* plan = app.add_subcommand("plan", "Landmark grid + RFICP timed path");
  plan->add_option("--scenario", scenario_path, "Scenario config file")->required();
  plan->add_option("--seed", seed, "Scenario seed");
  plan->add_option("--set", overrides, "Override config values (section.key=value)");
  plan->add_option("--out", out_path, "Timed path JSONL output")->required();

  auto* simulate = app.add_subcommand("simulate", "Full SHIFT run with obstacle replay");
  simulate->add_option("--scenario", scenario_path, "Scenario config file")->required();
  simulate->add_option("--seed", seed, "Scenario seed");
  simulate->add_option("--set", overrides, "Override config values");
  simulate->add_option("--out", out_path, "Trajectory log JSONL")->required();
  simulate->add_option("--metrics", metrics_path, "Metrics JSON output");
  simulate->add_option("--coverage-csv", coverage_csv, "Coverage heatmap CSV");

  auto* baseline = app.add_subcommand("baseline", "Constant-speed comparison run");
  baseline->add_option("--scenario", scenario_path, "Scenario config file")->required();
  baseline->add_option("--seed", seed, "Scenario seed");
  baseline->add_option("--set", overrides, "Override config values");
  baseline->add_option("--out", out_path, "Trajectory log JSONL")->required();
  baseline->add_option("--metrics", metrics_path, "Metrics JSON output");
  baseline->add_option("--coverage-csv", coverage_csv, "Coverage heatmap CSV");

  auto* metrics = app.add_subcommand("metrics", "Recompute metrics from a trajectory log");
  metrics->add_option("--scenario", scenario_path, "Scenario config file")->required();
  metrics->add_option("--seed", seed, "Scenario seed");
  metrics->add_option("--set", overrides, "Override config values");
  metrics->add_option("--run", run_path, "Trajectory log JSONL")->required();
  metrics->add_option("--out", out_path, "Metrics JSON output")->required();

  auto* bench = app.add_subcommand("bench-local", "Random-cylinder local planning benchmark");
  bench->add_option("--scenario", scenario_path, "Optional planner config file");
  bench->add_option("--density", density, "Obstacles per m^2 (0.1 - 0.5)");
  bench->add_option("--trials", trials, "Trial count");
  bench->add_option("--seed", seed, "Base seed");
  bench->add_option("--set", overrides, "Override config values");
  bench->add_option("--out", out_path, "CSV output")->required();

  auto* dump = app.add_subcommand("dump-tree", "Build an IKD-tree from a cloud and dump nodes");
  dump->add_option("--cloud", cloud_path, "Point cloud CSV or PLY")->required();
  dump->add_option("--out", out_path, "Node list JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) {
      return cmd_fit_surface(cloud_path, degree, ctrl_u, ctrl_v, resolution, interp,
                             out_path);
    }
    if (plan->parsed()) {
      return cmd_plan(load_config(scenario_path, overrides), seed, out_path);
    }
    if (simulate->parsed()) {
      return run_and_write(load_config(scenario_path, overrides), seed, out_path,
                           metrics_path, coverage_csv, false);
    }
    if (baseline->parsed()) {
      return run_and_write(load_config(scenario_path, overrides), seed, out_path,
                           metrics_path, coverage_csv, true);
    }
    if (metrics->parsed()) {
      return cmd_metrics(load_config(scenario_path, overrides), seed, run_path, out_path);
    }
    if (bench->parsed()) {
      return cmd_bench(load_config(scenario_path, overrides), density, trials, seed,
                       out_path);
    }
    if (dump->parsed()) {
      return cmd_dump_tree(cloud_path, out_path);
    }
  } catch (const shift::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  }
  return kExitConfig;
}
