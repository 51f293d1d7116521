#pragma once

#include "shift/astar.hpp"
#include "shift/config.hpp"
#include "shift/rficp.hpp"
#include "shift/scenario.hpp"
#include "shift/surface.hpp"
#include "shift/swopt.hpp"
#include "shift/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace shift {

/// Accumulated coverage per cell, aligned with the semantic grid.
struct CoverageLedger {
  Vec2 origin{Vec2::Zero()};
  double resolution = 0.0;
  int rows = 0, cols = 0;
  std::vector<double> coverage;  // row-major, saturated at 1
  std::vector<int> visits;       // per-cell waypoint entries

  static CoverageLedger like(const SemanticField& field);

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) +
           static_cast<std::size_t>(j);
  }
  std::pair<int, int> cell_of(double x, double y) const;
  double cell_area() const { return resolution * resolution; }
};

/// Deposit G(q;p) * (1 - exp(-lambda t)) * cell_area into each cell within
/// the influence radius (horizontal distance), saturating at 1.
void deposit_coverage(CoverageLedger& ledger, const Vec3& position, double dwell,
                      const CoverageParams& params);

/// Count the waypoint's containing cell as entered.
void mark_visit(CoverageLedger& ledger, const Vec3& position);

struct LatencyStats {
  int passes = 0;
  double mean_ms = 0.0;
  double median_ms = 0.0;
  double p95_ms = 0.0;
  double max_ms = 0.0;
};

struct MetricsReport {
  double completeness_pct = 0.0;         // free cells at or above c_done
  double demand_completeness_pct = 0.0;  // reachable demand cells at or above c_done
  double overlap_pct = 0.0;
  double energy = 0.0;                   // sum v^2 dt + P_idle * dwell
  double energy_efficiency = 0.0;        // cleaned area / energy (0 when nothing cleaned)
  std::optional<double> energy_efficiency_norm;  // vs the paired baseline run
  double uniformity_pct = 0.0;
  double cleaned_area_m2 = 0.0;
  double total_time_s = 0.0;
  double path_length_m = 0.0;
  LatencyStats latency;
};

struct MetricsParams {
  double c_done = 0.6;
  double idle_power_fraction = 0.25;  // dwell power as a fraction of cruise at v_max
  CoverageParams coverage;
  std::optional<double> baseline_energy_efficiency;
};

/// Table I analogues from a completed run. Overlap is recovered by replaying
/// the trajectory deposits; completeness and uniformity read the ledger.
MetricsReport compute_metrics(const CoverageLedger& ledger, const TimedPath& trajectory,
                              const ScenarioData& scenario, const MetricsParams& params);

struct SimConfig {
  SurfaceFitParams fit;
  double alpha_k = 2.0;
  double beta_h = 2.0;
  double lambda_smooth = 0.5;
  int smooth_max_iters = 50;
  bool filter_by_removal = false;
  Interpolation interpolation = Interpolation::kBilinear;

  double landmark_spacing = 0.5;
  double z_offset = 0.5;
  bool transpose_rows = false;

  CoverageParams coverage;
  SwoptParams swopt;
  MetricsParams metrics;

  std::uint64_t seed = 0;

  static SimConfig from_config(const Config& cfg);
};

struct RunResult {
  TimedPath trajectory;
  CoverageLedger ledger;
  MetricsReport metrics;
  std::vector<PassReport> passes;
  ElevationMap elevation;
  double surface_rms = 0.0;
  bool infeasible = false;
};

/// Full pipeline: surface extraction, landmark planning, RFICP, obstacle
/// timeline replay with local re-optimization, metrics.
RunResult run_shift(const ScenarioData& scenario, const SimConfig& config);

/// Same pipeline with the RFICP profile flattened to its mean speed and mean
/// dwell (the constant-speed comparison run).
RunResult run_baseline(const ScenarioData& scenario, const SimConfig& config);

/// Deterministic trajectory log (JSON lines, no wall-clock fields).
std::string trajectory_log(const RunResult& result);

std::string metrics_to_json(const MetricsReport& report);

/// Coverage heatmap rows "x,y,c" for plotting.
std::string ledger_to_csv(const CoverageLedger& ledger);

struct BenchTrial {
  int trial = 0;
  double density = 0.0;
  double flight_time_s = 0.0;
  double path_length_m = 0.0;
  double energy_norm = 0.0;
  double planning_ms = 0.0;  // median per-pass latency
  double reopt_fraction = 0.0;
};

/// Random-cylinder local-planning benchmark at the given density.
std::vector<BenchTrial> bench_local(double density, int trials, std::uint64_t seed,
                                    const SimConfig& config);

std::string bench_to_csv(const std::vector<BenchTrial>& trials);

}  // namespace shift
