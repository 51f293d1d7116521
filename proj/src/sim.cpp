#include "shift/sim.hpp"

#include "shift/landmark.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace shift {

using nlohmann::json;

CoverageLedger CoverageLedger::like(const SemanticField& field) {
  CoverageLedger ledger;
  ledger.origin = field.origin;
  ledger.resolution = field.resolution;
  ledger.rows = field.rows;
  ledger.cols = field.cols;
  ledger.coverage.assign(static_cast<std::size_t>(field.rows) *
                             static_cast<std::size_t>(field.cols),
                         0.0);
  ledger.visits.assign(ledger.coverage.size(), 0);
  return ledger;
}

std::pair<int, int> CoverageLedger::cell_of(double x, double y) const {
  const int j = std::clamp(
      static_cast<int>(std::round((x - origin.x()) / resolution)), 0, cols - 1);
  const int i = std::clamp(
      static_cast<int>(std::round((y - origin.y()) / resolution)), 0, rows - 1);
  return {i, j};
}

void deposit_coverage(CoverageLedger& ledger, const Vec3& position, double dwell,
                      const CoverageParams& params) {
  if (dwell < 0.0) throw DomainError("deposit_coverage: dwell must be >= 0");
  if (dwell == 0.0) return;
  const double gain = 1.0 - std::exp(-params.lambda_cov * dwell);
  const double area = ledger.cell_area();
  const double r = params.radius;
  const int i_lo = std::max(0, static_cast<int>(std::ceil(
                                   (position.y() - r - ledger.origin.y()) / ledger.resolution)));
  const int i_hi = std::min(ledger.rows - 1,
                            static_cast<int>(std::floor(
                                (position.y() + r - ledger.origin.y()) / ledger.resolution)));
  const int j_lo = std::max(0, static_cast<int>(std::ceil(
                                   (position.x() - r - ledger.origin.x()) / ledger.resolution)));
  const int j_hi = std::min(ledger.cols - 1,
                            static_cast<int>(std::floor(
                                (position.x() + r - ledger.origin.x()) / ledger.resolution)));
  for (int i = i_lo; i <= i_hi; ++i) {
    const double cy = ledger.origin.y() + ledger.resolution * i;
    for (int j = j_lo; j <= j_hi; ++j) {
      const double cx = ledger.origin.x() + ledger.resolution * j;
      const double dist = std::hypot(cx - position.x(), cy - position.y());
      const double g = gaussian_kernel_from_distance(dist, params);
      if (g <= 0.0) continue;
      double& c = ledger.coverage[ledger.index(i, j)];
      c = std::min(1.0, c + g * gain * area);
    }
  }
}

void mark_visit(CoverageLedger& ledger, const Vec3& position) {
  const auto [i, j] = ledger.cell_of(position.x(), position.y());
  ++ledger.visits[ledger.index(i, j)];
}

namespace {

double segment_time(const TimedPath& traj, std::size_t i) {
  if (i + 1 >= traj.size()) return 0.0;
  const double ds = (traj.points[i + 1].position - traj.points[i].position).norm();
  return ds / std::max(traj.points[i].v, 1e-9);
}

double waypoint_occupancy(const TimedPath& traj, std::size_t i) {
  const double before = i > 0 ? segment_time(traj, i - 1) : 0.0;
  const double after = segment_time(traj, i);
  return traj.points[i].t_dwell + 0.5 * (before + after);
}

LatencyStats latency_stats(const std::vector<PassReport>& passes) {
  LatencyStats stats;
  if (passes.empty()) return stats;
  std::vector<double> ms;
  ms.reserve(passes.size());
  for (const auto& p : passes) ms.push_back(p.wall_ms);
  std::sort(ms.begin(), ms.end());
  stats.passes = static_cast<int>(ms.size());
  stats.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / ms.size();
  stats.median_ms = ms[ms.size() / 2];
  stats.p95_ms = ms[static_cast<std::size_t>(0.95 * (ms.size() - 1))];
  stats.max_ms = ms.back();
  return stats;
}

struct PlanContext {
  ParametricSurface surface;
  double surface_rms = 0.0;
  ElevationMap elevation;
  TimedPath timed;
};

PlanContext plan_coverage(const ScenarioData& scenario, const SimConfig& config) {
  SurfaceFit fit = fit_surface(scenario.cloud, config.fit);
  ParametricSurface surface = fit.surface;

  const auto samples = curvature_field(surface);
  const auto thresholds = compute_thresholds(samples, config.alpha_k, config.beta_h);
  const auto outliers = classify_outliers(samples, thresholds);
  if (!outliers.empty()) {
    if (config.filter_by_removal) {
      SurfaceFit refit = remove_and_refit(scenario.cloud, surface, outliers, config.fit);
      surface = refit.surface;
      fit.rms_residual = refit.rms_residual;
    } else {
      SmoothResult smooth = laplacian_smooth(surface, outliers, thresholds,
                                             config.lambda_smooth, config.smooth_max_iters);
      surface = smooth.surface;
    }
  }

  PlanContext ctx{std::move(surface), fit.rms_residual, ElevationMap{}, {}};
  ctx.elevation = extract_elevation(ctx.surface, scenario.semantic.resolution,
                                    config.interpolation);

  LandmarkGrid grid = grid_landmarks(ctx.surface, config.landmark_spacing);
  grid = apply_offset(grid, config.z_offset);
  const CoveragePath cpath = boustrophedon_order(grid, config.transpose_rows);
  ctx.timed = allocate_velocities(cpath, scenario.semantic, config.coverage);
  return ctx;
}

void flatten_to_baseline(TimedPath& path, const CoverageParams& params) {
  if (path.empty()) return;
  double v_sum = 0.0, t_sum = 0.0;
  for (const auto& p : path.points) {
    v_sum += p.v;
    t_sum += p.t_dwell;
  }
  const double v_mean = std::clamp(v_sum / path.size(), params.v_min, params.v_max);
  const double t_mean = t_sum / path.size();
  for (auto& p : path.points) {
    p.v = v_mean;
    p.t_dwell = t_mean;
    p.saturated = false;
  }
}

RunResult run_pipeline(const ScenarioData& scenario, const SimConfig& config,
                       bool baseline) {
  PlanContext ctx = plan_coverage(scenario, config);
  if (baseline) flatten_to_baseline(ctx.timed, config.coverage);

  RunResult result;
  result.elevation = ctx.elevation;
  result.surface_rms = ctx.surface_rms;

  SwoptParams swopt = config.swopt;
  swopt.elevation = &result.elevation;
  swopt.z_offset = config.z_offset;

  IkdTree tree;
  TimedPath traj = std::move(ctx.timed);
  std::size_t next_event = 0;

  auto apply_due_events = [&](double now, std::size_t from_index) {
    ObstacleUpdate update;
    while (next_event < scenario.events.size() &&
           scenario.events[next_event].time <= now) {
      const auto& ev = scenario.events[next_event];
      if (ev.add) {
        update.insert_points.insert(update.insert_points.end(), ev.points.begin(),
                                    ev.points.end());
      } else {
        update.remove_boxes.push_back(ev.box);
      }
      ++next_event;
    }
    if (update.empty()) return;
    TimedPath suffix;
    suffix.points.assign(traj.points.begin() + static_cast<long>(from_index),
                         traj.points.end());
    SwoptResult res = ikd_swopt(suffix, tree, update, swopt);
    std::copy(res.path.points.begin(), res.path.points.end(),
              traj.points.begin() + static_cast<long>(from_index));
    for (auto& pass : res.passes) result.passes.push_back(std::move(pass));
    result.infeasible = result.infeasible || res.infeasible;
  };

  // Obstacles known at start, then the drive loop with timed replay.
  apply_due_events(0.0, 0);

  CoverageLedger ledger = CoverageLedger::like(scenario.semantic);
  double sim_time = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& pt = traj.points[i];
    mark_visit(ledger, pt.position);
    deposit_coverage(ledger, pt.position, waypoint_occupancy(traj, i),
                     config.coverage);
    sim_time += pt.t_dwell;
    if (i + 1 < traj.size()) {
      sim_time += segment_time(traj, i);
      apply_due_events(sim_time, i + 1);
    }
  }

  result.trajectory = std::move(traj);
  result.ledger = std::move(ledger);

  MetricsParams metrics_params = config.metrics;
  metrics_params.coverage = config.coverage;
  result.metrics = compute_metrics(result.ledger, result.trajectory, scenario,
                                   metrics_params);
  result.metrics.latency = latency_stats(result.passes);
  return result;
}

}  // namespace

RunResult run_shift(const ScenarioData& scenario, const SimConfig& config) {
  return run_pipeline(scenario, config, false);
}

RunResult run_baseline(const ScenarioData& scenario, const SimConfig& config) {
  return run_pipeline(scenario, config, true);
}

MetricsReport compute_metrics(const CoverageLedger& ledger, const TimedPath& trajectory,
                              const ScenarioData& scenario, const MetricsParams& params) {
  MetricsReport report;
  const SemanticField& semantic = scenario.semantic;
  if (ledger.rows != semantic.rows || ledger.cols != semantic.cols) {
    throw DomainError("compute_metrics: ledger and semantic grid misaligned");
  }

  int free_cells = 0, free_done = 0;
  int demand_cells = 0, reachable_demand = 0, reachable_done = 0;
  int cleaned_cells = 0;
  std::vector<double> intensity;  // coverage per unit demanded effort
  for (int i = 0; i < ledger.rows; ++i) {
    for (int j = 0; j < ledger.cols; ++j) {
      const std::size_t idx = ledger.index(i, j);
      const double c = ledger.coverage[idx];
      const double x = ledger.origin.x() + ledger.resolution * j;
      const double y = ledger.origin.y() + ledger.resolution * i;
      const bool blocked = scenario.blocked_by_static(x, y);
      const double demand = params.coverage.k * semantic.at(i, j) - params.coverage.c_target;
      if (c >= params.c_done) ++cleaned_cells;
      if (!blocked) {
        ++free_cells;
        if (c >= params.c_done) ++free_done;
      }
      if (demand > 0.0) {
        ++demand_cells;
        intensity.push_back(c / demand);
        if (!blocked) {
          ++reachable_demand;
          if (c >= params.c_done) ++reachable_done;
        }
      }
    }
  }
  report.completeness_pct =
      free_cells > 0 ? 100.0 * free_done / free_cells : 0.0;
  report.demand_completeness_pct =
      reachable_demand > 0 ? 100.0 * reachable_done / reachable_demand : 0.0;
  report.cleaned_area_m2 = cleaned_cells * ledger.cell_area();

  // Cleaning uniformity: 1 - CoV of per-cell intensity over the demand set.
  if (!intensity.empty()) {
    const double mean = std::accumulate(intensity.begin(), intensity.end(), 0.0) /
                        static_cast<double>(intensity.size());
    if (mean > 0.0) {
      double var = 0.0;
      for (const double u : intensity) var += (u - mean) * (u - mean);
      const double cov = std::sqrt(var / static_cast<double>(intensity.size())) / mean;
      report.uniformity_pct = std::max(0.0, 1.0 - cov) * 100.0;
    }
  }

  // Overlap, path length, energy and time from a deposit replay.
  CoverageLedger replay = CoverageLedger::like(semantic);
  double revisited_len = 0.0, total_len = 0.0;
  double energy_rate = 0.0, dwell_total = 0.0, travel_time = 0.0;
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const auto& pt = trajectory.points[i];
    if (i > 0) {
      const auto& prev = trajectory.points[i - 1];
      const double ds = (pt.position - prev.position).norm();
      total_len += ds;
      energy_rate += prev.v * ds;  // v^2 * (ds / v)
      travel_time += ds / std::max(prev.v, 1e-9);
      const auto [ci, cj] = replay.cell_of(pt.position.x(), pt.position.y());
      const std::size_t cell = replay.index(ci, cj);
      if (replay.visits[cell] > 0 && replay.coverage[cell] >= params.c_done) {
        revisited_len += ds;
      }
    }
    mark_visit(replay, pt.position);
    deposit_coverage(replay, pt.position, waypoint_occupancy(trajectory, i),
                     params.coverage);
    dwell_total += pt.t_dwell;
  }
  report.overlap_pct = total_len > 0.0 ? 100.0 * revisited_len / total_len : 0.0;
  report.path_length_m = total_len;
  report.total_time_s = dwell_total + travel_time;
  const double idle_power =
      params.idle_power_fraction * params.coverage.v_max * params.coverage.v_max;
  report.energy = energy_rate + idle_power * dwell_total;
  report.energy_efficiency =
      (report.cleaned_area_m2 > 0.0 && report.energy > 0.0)
          ? report.cleaned_area_m2 / report.energy
          : 0.0;
  if (params.baseline_energy_efficiency.has_value() &&
      *params.baseline_energy_efficiency > 0.0) {
    report.energy_efficiency_norm =
        report.energy_efficiency / *params.baseline_energy_efficiency;
  }
  return report;
}

SimConfig SimConfig::from_config(const Config& cfg) {
  SimConfig sim;
  sim.fit.degree = cfg.get_int("surface.degree", sim.fit.degree);
  sim.fit.num_ctrl_u = cfg.get_int("surface.ctrl_u", sim.fit.num_ctrl_u);
  sim.fit.num_ctrl_v = cfg.get_int("surface.ctrl_v", sim.fit.num_ctrl_v);
  sim.fit.regularization = cfg.get_double("surface.regularization", sim.fit.regularization);
  sim.alpha_k = cfg.get_double("surface.alpha_k", sim.alpha_k);
  sim.beta_h = cfg.get_double("surface.beta_h", sim.beta_h);
  sim.lambda_smooth = cfg.get_double("surface.lambda_smooth", sim.lambda_smooth);
  sim.smooth_max_iters = cfg.get_int("surface.smooth_max_iters", sim.smooth_max_iters);
  const std::string filter = cfg.get_string("surface.filter", "smooth");
  if (filter == "smooth") {
    sim.filter_by_removal = false;
  } else if (filter == "remove") {
    sim.filter_by_removal = true;
  } else {
    throw ConfigError("surface.filter must be smooth or remove");
  }
  const std::string interp = cfg.get_string("surface.interpolation", "bilinear");
  if (interp == "bilinear") {
    sim.interpolation = Interpolation::kBilinear;
  } else if (interp == "bicubic") {
    sim.interpolation = Interpolation::kBicubic;
  } else {
    throw ConfigError("surface.interpolation must be bilinear or bicubic");
  }

  sim.landmark_spacing = cfg.get_double("landmark.spacing", sim.landmark_spacing);
  sim.z_offset = cfg.get_double("landmark.z_offset", sim.z_offset);
  sim.transpose_rows = cfg.get_bool("landmark.transpose", sim.transpose_rows);

  sim.coverage.k = cfg.get_double("coverage.k", sim.coverage.k);
  sim.coverage.c_target = cfg.get_double("coverage.c_target", sim.coverage.c_target);
  sim.coverage.sigma = cfg.get_double("coverage.sigma", sim.coverage.sigma);
  sim.coverage.radius = cfg.get_double("coverage.radius", sim.coverage.radius);
  sim.coverage.lambda_cov = cfg.get_double("coverage.lambda", sim.coverage.lambda_cov);
  sim.coverage.v_min = cfg.get_double("coverage.v_min", sim.coverage.v_min);
  sim.coverage.v_max = cfg.get_double("coverage.v_max", sim.coverage.v_max);
  sim.coverage.a_max = cfg.get_double("coverage.a_max", sim.coverage.a_max);
  sim.coverage.delta_s = cfg.get_double("coverage.delta_s", sim.coverage.delta_s);
  sim.coverage.ln_floor = cfg.get_double("coverage.ln_floor", sim.coverage.ln_floor);
  sim.coverage.planar_disk_mass =
      cfg.get_bool("coverage.planar_disk_mass", sim.coverage.planar_disk_mass);
  sim.coverage.validate();

  auto& sw = sim.swopt;
  sw.safety.tau_safe = cfg.get_double("swopt.tau_safe", sw.safety.tau_safe);
  sw.safety.w_d = cfg.get_double("swopt.w_d", sw.safety.w_d);
  sw.safety.w_c = cfg.get_double("swopt.w_c", sw.safety.w_c);
  sw.safety.w_f = cfg.get_double("swopt.w_f", sw.safety.w_f);
  sw.safety.d_ref = cfg.get_double("swopt.d_ref", sw.safety.d_ref);
  sw.safety.theta_max = cfg.get_double("swopt.theta_max", sw.safety.theta_max);
  sw.safety.half_width = cfg.get_int("swopt.half_width", sw.safety.half_width);
  sw.safety.r_safe_floor = cfg.get_double("swopt.r_safe_floor", sw.safety.r_safe_floor);
  sw.safety.collision_clearance =
      cfg.get_double("swopt.collision_clearance", sw.safety.collision_clearance);
  sw.safety.v_min = sim.coverage.v_min;
  sw.safety.v_max = sim.coverage.v_max;
  sw.safety.a_max = sim.coverage.a_max;
  sw.cost.w_obs = cfg.get_double("swopt.w_obs", sw.cost.w_obs);
  sw.cost.w_smooth = cfg.get_double("swopt.w_smooth", sw.cost.w_smooth);
  sw.cost.w_len = cfg.get_double("swopt.w_len", sw.cost.w_len);
  sw.cost.d_safe = cfg.get_double("swopt.d_safe", sw.cost.d_safe);
  sw.cost.max_iterations = cfg.get_int("swopt.max_iterations", sw.cost.max_iterations);
  sw.cost.gradient_tolerance =
      cfg.get_double("swopt.gradient_tolerance", sw.cost.gradient_tolerance);
  sw.cost.cost_tolerance = cfg.get_double("swopt.cost_tolerance", sw.cost.cost_tolerance);
  sw.cost.history = cfg.get_int("swopt.history", sw.cost.history);
  sw.max_passes = cfg.get_int("swopt.max_passes", sw.max_passes);
  sw.bspline_degree = cfg.get_int("swopt.bspline_degree", sw.bspline_degree);
  sw.parallel_windows = cfg.get_bool("swopt.parallel", sw.parallel_windows);

  const double robot_radius = cfg.get_double("robot.radius", 0.2);
  sw.astar.alpha_clear = cfg.get_double("astar.alpha_clear", sw.astar.alpha_clear);
  sw.astar.epsilon_d = cfg.get_double("astar.epsilon_d", sw.astar.epsilon_d);
  sw.astar.hard_clearance = cfg.get_double("astar.hard_clearance", robot_radius);

  sim.metrics.c_done = cfg.get_double("metrics.c_done", sim.metrics.c_done);
  sim.metrics.idle_power_fraction =
      cfg.get_double("metrics.idle_power_fraction", sim.metrics.idle_power_fraction);
  sim.metrics.coverage = sim.coverage;

  sim.seed = static_cast<std::uint64_t>(cfg.get_int("sim.seed", 0));
  return sim;
}

std::string trajectory_log(const RunResult& result) {
  std::ostringstream out;
  for (const auto& pt : result.trajectory.points) {
    json j{{"x", pt.position.x()}, {"y", pt.position.y()}, {"z", pt.position.z()},
           {"t_dwell", pt.t_dwell}, {"v", pt.v}};
    if (pt.window_id >= 0) {
      j["window_id"] = pt.window_id;
    } else {
      j["window_id"] = nullptr;
    }
    out << j.dump() << '\n';
  }
  return out.str();
}

std::string metrics_to_json(const MetricsReport& report) {
  json j;
  j["completeness_pct"] = report.completeness_pct;
  j["demand_completeness_pct"] = report.demand_completeness_pct;
  j["overlap_pct"] = report.overlap_pct;
  j["energy"] = report.energy;
  j["energy_efficiency"] = report.energy_efficiency;
  if (report.energy_efficiency_norm.has_value()) {
    j["energy_efficiency_norm"] = *report.energy_efficiency_norm;
  } else {
    j["energy_efficiency_norm"] = nullptr;
  }
  j["uniformity_pct"] = report.uniformity_pct;
  j["cleaned_area_m2"] = report.cleaned_area_m2;
  j["total_time_s"] = report.total_time_s;
  j["path_length_m"] = report.path_length_m;
  j["latency"] = {{"passes", report.latency.passes},
                  {"mean_ms", report.latency.mean_ms},
                  {"median_ms", report.latency.median_ms},
                  {"p95_ms", report.latency.p95_ms},
                  {"max_ms", report.latency.max_ms}};
  return j.dump(2);
}

std::string ledger_to_csv(const CoverageLedger& ledger) {
  std::ostringstream out;
  out << "x,y,c\n";
  out.precision(17);
  for (int i = 0; i < ledger.rows; ++i) {
    for (int j = 0; j < ledger.cols; ++j) {
      out << ledger.origin.x() + ledger.resolution * j << ','
          << ledger.origin.y() + ledger.resolution * i << ','
          << ledger.coverage[ledger.index(i, j)] << '\n';
    }
  }
  return out.str();
}

std::vector<BenchTrial> bench_local(double density, int trials, std::uint64_t seed,
                                    const SimConfig& config) {
  std::vector<BenchTrial> results;
  results.reserve(static_cast<std::size_t>(trials));
  for (int trial = 0; trial < trials; ++trial) {
    ScenarioSpec spec;
    spec.terrain = TerrainKind::kFlat;
    spec.extent = Vec2(10.0, 10.0);
    spec.samples_x = 40;
    spec.samples_y = 40;
    spec.semantic = SemanticKind::kUniform;
    spec.uniform_level = 0.5;
    spec.grid_resolution = 0.4;
    const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(trial);
    ScenarioData data = generate_scenario(spec, trial_seed);

    PlanContext ctx = plan_coverage(data, config);
    SwoptParams swopt = config.swopt;
    swopt.elevation = &ctx.elevation;
    swopt.z_offset = config.z_offset;

    // Random cylinder field delivered one obstacle event at a time.
    RandomStream rng(trial_seed ^ 0x5bd1e995u);
    const int n_obstacles =
        std::max(1, static_cast<int>(std::round(density * spec.extent.x() * spec.extent.y())));
    IkdTree tree;
    TimedPath traj = std::move(ctx.timed);
    const std::size_t traj_len = traj.size();

    std::vector<double> pass_ms;
    std::vector<double> event_fractions;
    for (int o = 0; o < n_obstacles; ++o) {
      Cylinder cyl;
      cyl.radius = 0.15;
      cyl.height = 1.5;
      cyl.center = Vec2(rng.uniform(0.5, 9.5), rng.uniform(0.5, 9.5));
      cyl.base_z = 0.0;
      ObstacleUpdate update;
      update.insert_points = sample_cylinder(cyl, 0.1);
      SwoptResult res = ikd_swopt(traj, tree, update, swopt);
      traj = std::move(res.path);

      std::vector<std::uint8_t> touched(traj_len, 0);
      for (const auto& pass : res.passes) {
        pass_ms.push_back(pass.wall_ms);
        for (const auto& w : pass.windows) {
          for (int k = w.lo; k <= w.hi && k < static_cast<int>(traj_len); ++k) {
            touched[static_cast<std::size_t>(k)] = 1;
          }
        }
      }
      const int n_touched =
          static_cast<int>(std::count(touched.begin(), touched.end(), 1));
      event_fractions.push_back(static_cast<double>(n_touched) /
                                static_cast<double>(traj_len));
    }

    BenchTrial bt;
    bt.trial = trial;
    bt.density = density;
    double dwell = 0.0, travel = 0.0, length = 0.0, rate = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      dwell += traj.points[i].t_dwell;
      if (i + 1 < traj.size()) {
        const double ds = (traj.points[i + 1].position - traj.points[i].position).norm();
        length += ds;
        travel += ds / std::max(traj.points[i].v, 1e-9);
        rate += traj.points[i].v * ds;
      }
    }
    bt.flight_time_s = dwell + travel;
    bt.path_length_m = length;
    const double idle_power = config.metrics.idle_power_fraction *
                              config.coverage.v_max * config.coverage.v_max;
    // Normalized by cruising the same length at v_max.
    bt.energy_norm = (rate + idle_power * dwell) /
                     std::max(1e-9, config.coverage.v_max * length);
    if (!pass_ms.empty()) {
      std::sort(pass_ms.begin(), pass_ms.end());
      bt.planning_ms = pass_ms[pass_ms.size() / 2];
    }
    if (!event_fractions.empty()) {
      bt.reopt_fraction = std::accumulate(event_fractions.begin(), event_fractions.end(), 0.0) /
                          static_cast<double>(event_fractions.size());
    }
    results.push_back(bt);
  }
  return results;
}

std::string bench_to_csv(const std::vector<BenchTrial>& trials) {
  std::ostringstream out;
  out << "trial,density,t_s,L_m,E_norm,tp_ms\n";
  out.precision(10);
  for (const auto& t : trials) {
    out << t.trial << ',' << t.density << ',' << t.flight_time_s << ','
        << t.path_length_m << ',' << t.energy_norm << ',' << t.planning_ms << '\n';
  }
  return out.str();
}

}  // namespace shift
