#pragma once

#include "shift/astar.hpp"
#include "shift/elevation_map.hpp"
#include "shift/ikd_tree.hpp"
#include "shift/rficp.hpp"
#include "shift/types.hpp"

#include <optional>
#include <vector>

namespace shift {

struct SafetyParams {
  double tau_safe = 0.6;
  double w_d = 0.5;                 // distance component weight
  double w_c = 0.3;                 // continuity component weight
  double w_f = 0.2;                 // feasibility component weight
  double d_ref = 1.0;               // m, distance normalizer
  double theta_max = 1.0471975511965976;  // pi/3, heading-change normalizer
  int half_width = 5;               // window half-width, waypoints
  double r_safe_floor = 0.25;       // m, keeps the safety region non-empty
  double collision_clearance = 0.2; // m, feasibility collision bound
  double v_min = 0.1, v_max = 2.0, a_max = 1.0;  // feasibility limits

  void validate() const;
};

struct SafetyAssessment {
  double r_safe = 0.0;
  double score = 0.0;
  bool compliant = false;
};

/// Contiguous waypoint range scheduled for local optimization. The two
/// outermost points on each side are frozen; the rest are free.
struct Window {
  int lo = 0;
  int hi = 0;  // inclusive

  int size() const { return hi - lo + 1; }
  int first_free() const { return lo + 2; }
  int last_free() const { return hi - 2; }
  int free_count() const { return std::max(0, hi - lo - 3); }
  bool has_free() const { return free_count() > 0; }
};

struct WindowCostParams {
  double w_obs = 10.0;
  double w_smooth = 1.0;
  double w_len = 0.1;
  double d_safe = 0.3;  // m
  int max_iterations = 200;
  double gradient_tolerance = 1e-6;
  double cost_tolerance = 1e-10;
  int history = 8;
};

struct WindowReport {
  int lo = 0, hi = 0;
  int iterations = 0;
  double final_cost = 0.0;
  bool converged = false;
  double min_clearance = kInfinity;
  bool seeded = false;
  bool infeasible = false;
};

struct PassReport {
  std::vector<WindowReport> windows;
  double wall_ms = 0.0;  // excluded from deterministic logs
  int reoptimized_waypoints = 0;
};

/// Obstacle change delivered to the local planner.
struct ObstacleUpdate {
  std::vector<Vec3> insert_points;
  std::vector<Aabb> remove_boxes;

  bool empty() const { return insert_points.empty() && remove_boxes.empty(); }
};

struct SwoptParams {
  SafetyParams safety;
  WindowCostParams cost;
  AStarCostParams astar;
  int max_passes = 10;
  int bspline_degree = 3;
  bool parallel_windows = false;
  // Context for A* seeding; seeding is skipped when absent.
  const ElevationMap* elevation = nullptr;
  double z_offset = 0.0;
};

struct SwoptResult {
  TimedPath path;
  std::vector<PassReport> passes;
  bool compliant = true;
  bool infeasible = false;
};

/// Safety score S_k: mean over waypoints inside the circular safety region of
/// w_d * min(D/d_ref, 1) + w_c * (1 - min(dtheta/theta_max, 1)) + w_f * feas.
SafetyAssessment safety_score(const TimedPath& path, int k,
                              const IkdTree::Snapshot& tree,
                              const SafetyParams& params);

/// Flag [k - half_width, k + half_width] for every non-compliant k, merge
/// overlapping ranges, clip at path ends.
std::vector<Window> identify_noncompliant(const TimedPath& path,
                                          const IkdTree::Snapshot& tree,
                                          const SafetyParams& params);

/// J = w_obs * sum max(0, d_safe - D)^2 + w_smooth * sum ||second diff||^2 +
/// w_len * sum ||step||^2 over the window, with the analytic gradient with
/// respect to the free interior points (flattened xyz).
double window_cost(const Eigen::VectorXd& x, const TimedPath& path,
                   const Window& window, const IkdTree::Snapshot& tree,
                   const WindowCostParams& params, Eigen::VectorXd* gradient);

/// Quasi-Newton refinement of a window's interior; boundary points fixed.
WindowReport optimize_window(TimedPath& path, const Window& window,
                             const IkdTree::Snapshot& tree,
                             const WindowCostParams& params);

/// Replace each window span with samples of a clamped B-spline through the
/// span's points; everything outside the windows is untouched.
void bspline_reconnect(TimedPath& path, const std::vector<Window>& windows,
                       int degree = 3);

/// Alg. 2 loop: apply the update, then identify / seed / optimize / reconnect
/// until compliant or the pass cap. An empty update returns the path as-is.
SwoptResult ikd_swopt(const TimedPath& path, IkdTree& tree,
                      const ObstacleUpdate& update, const SwoptParams& params);

}  // namespace shift
