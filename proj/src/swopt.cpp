#include "shift/swopt.hpp"

#include "shift/bspline.hpp"
#include "shift/lbfgs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>

namespace shift {

void SafetyParams::validate() const {
  if (w_d < 0.0 || w_c < 0.0 || w_f < 0.0) {
    throw ConfigError("safety: weights must be nonnegative");
  }
  if (std::abs(w_d + w_c + w_f - 1.0) > 1e-9) {
    throw ConfigError("safety: weights must sum to 1");
  }
  if (half_width < 1) throw ConfigError("safety: half_width must be >= 1");
}

namespace {

double heading_change(const TimedPath& path, int i) {
  const int n = static_cast<int>(path.size());
  if (i <= 0 || i >= n - 1) return 0.0;
  const Vec3 a = path.points[static_cast<std::size_t>(i)].position -
                 path.points[static_cast<std::size_t>(i - 1)].position;
  const Vec3 b = path.points[static_cast<std::size_t>(i + 1)].position -
                 path.points[static_cast<std::size_t>(i)].position;
  const double na = a.norm();
  const double nb = b.norm();
  if (na < 1e-12 || nb < 1e-12) return 0.0;
  const double cosang = std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
  return std::acos(cosang);
}

bool speed_feasible(const TimedPath& path, int i, const SafetyParams& params) {
  const auto& pt = path.points[static_cast<std::size_t>(i)];
  const double eps = 1e-9;
  if (pt.v < params.v_min - eps || pt.v > params.v_max + eps) return false;
  const int n = static_cast<int>(path.size());
  if (i + 1 < n) {
    const auto& nx = path.points[static_cast<std::size_t>(i + 1)];
    const double ds = (nx.position - pt.position).norm();
    if (std::abs(nx.v * nx.v - pt.v * pt.v) > 2.0 * params.a_max * ds + eps) {
      return false;
    }
  }
  return true;
}

}  // namespace

namespace {

// Combined per-waypoint contribution to Eq. 21's weighted mean.
double waypoint_term(const TimedPath& path, int i, double obstacle_distance,
                     const SafetyParams& params) {
  const double dist_term = std::min(
      std::isfinite(obstacle_distance) ? obstacle_distance / params.d_ref : 1.0, 1.0);
  const double cont_term =
      1.0 - std::min(heading_change(path, i) / params.theta_max, 1.0);
  const bool feasible = (obstacle_distance > params.collision_clearance) &&
                        speed_feasible(path, i, params);
  return params.w_d * dist_term + params.w_c * cont_term +
         params.w_f * (feasible ? 1.0 : 0.0);
}

SafetyAssessment score_from_terms(const TimedPath& path, int k,
                                  const std::vector<double>& distances,
                                  const std::vector<double>& terms,
                                  const SafetyParams& params) {
  SafetyAssessment out;
  const double dk = distances[static_cast<std::size_t>(k)];
  out.r_safe = std::max(std::isfinite(dk) ? dk : kInfinity, params.r_safe_floor);
  const Vec3& pk = path.points[static_cast<std::size_t>(k)].position;
  double sum = 0.0;
  int count = 0;
  const double r_sq = out.r_safe * out.r_safe;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if ((path.points[i].position - pk).squaredNorm() > r_sq) continue;
    sum += terms[i];
    ++count;
  }
  out.score = count > 0 ? sum / count : 1.0;
  out.compliant = out.score >= params.tau_safe;
  return out;
}

}  // namespace

SafetyAssessment safety_score(const TimedPath& path, int k,
                              const IkdTree::Snapshot& tree,
                              const SafetyParams& params) {
  const int n = static_cast<int>(path.size());
  if (k < 0 || k >= n) throw DomainError("safety_score: index out of range");
  std::vector<double> distances(static_cast<std::size_t>(n));
  std::vector<double> terms(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    distances[static_cast<std::size_t>(i)] =
        tree->nearest_distance(path.points[static_cast<std::size_t>(i)].position);
    terms[static_cast<std::size_t>(i)] =
        waypoint_term(path, i, distances[static_cast<std::size_t>(i)], params);
  }
  return score_from_terms(path, k, distances, terms, params);
}

std::vector<Window> identify_noncompliant(const TimedPath& path,
                                          const IkdTree::Snapshot& tree,
                                          const SafetyParams& params) {
  params.validate();
  const int n = static_cast<int>(path.size());
  if (n < 2 * params.half_width + 1) {
    throw DomainError("identify_noncompliant: path shorter than one window");
  }
  // One tree query per waypoint; the per-point terms are shared by every k.
  std::vector<double> distances(static_cast<std::size_t>(n));
  std::vector<double> terms(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    distances[static_cast<std::size_t>(i)] =
        tree->nearest_distance(path.points[static_cast<std::size_t>(i)].position);
    terms[static_cast<std::size_t>(i)] =
        waypoint_term(path, i, distances[static_cast<std::size_t>(i)], params);
  }
  std::vector<std::pair<int, int>> ranges;
  for (int k = 0; k < n; ++k) {
    const SafetyAssessment a = score_from_terms(path, k, distances, terms, params);
    if (!a.compliant) {
      ranges.emplace_back(std::max(0, k - params.half_width),
                          std::min(n - 1, k + params.half_width));
    }
  }
  // Maximal contiguous runs of the union of flagged ranges.
  std::vector<Window> windows;
  for (const auto& [lo, hi] : ranges) {
    if (!windows.empty() && lo <= windows.back().hi + 1) {
      windows.back().hi = std::max(windows.back().hi, hi);
    } else {
      windows.push_back({lo, hi});
    }
  }
  return windows;
}

double window_cost(const Eigen::VectorXd& x, const TimedPath& path,
                   const Window& window, const IkdTree::Snapshot& tree,
                   const WindowCostParams& params, Eigen::VectorXd* gradient) {
  const int n_free = window.free_count();
  if (x.size() != 3 * n_free) throw DomainError("window_cost: variable size mismatch");

  // Window positions with the free interior replaced from x.
  std::vector<Vec3> pos(static_cast<std::size_t>(window.size()));
  for (int i = window.lo; i <= window.hi; ++i) {
    pos[static_cast<std::size_t>(i - window.lo)] =
        path.points[static_cast<std::size_t>(i)].position;
  }
  for (int f = 0; f < n_free; ++f) {
    pos[static_cast<std::size_t>(window.first_free() - window.lo + f)] =
        x.segment<3>(3 * f);
  }

  if (gradient != nullptr) gradient->setZero(3 * n_free);
  auto add_grad = [&](int path_index, const Vec3& g) {
    if (gradient == nullptr) return;
    const int f = path_index - window.first_free();
    if (f < 0 || f >= n_free) return;
    gradient->segment<3>(3 * f) += g;
  };

  double cost = 0.0;

  // Obstacle hinge over the free interior.
  for (int f = 0; f < n_free; ++f) {
    const int pi = window.first_free() + f;
    const Vec3& p = pos[static_cast<std::size_t>(pi - window.lo)];
    const DistanceFieldQuery q = tree->nearest(p);
    const double hinge = q.found ? std::max(0.0, params.d_safe - q.distance) : 0.0;
    if (hinge <= 0.0) continue;
    cost += params.w_obs * hinge * hinge;
    if (gradient != nullptr && q.distance > 1e-12) {
      const Vec3 away = (p - q.nearest) / q.distance;
      add_grad(pi, -2.0 * params.w_obs * hinge * away);
    }
  }

  // Second-difference smoothness over triples inside the window.
  for (int i = window.lo + 1; i <= window.hi - 1; ++i) {
    const Vec3 d = pos[static_cast<std::size_t>(i - 1 - window.lo)] -
                   2.0 * pos[static_cast<std::size_t>(i - window.lo)] +
                   pos[static_cast<std::size_t>(i + 1 - window.lo)];
    cost += params.w_smooth * d.squaredNorm();
    add_grad(i - 1, 2.0 * params.w_smooth * d);
    add_grad(i, -4.0 * params.w_smooth * d);
    add_grad(i + 1, 2.0 * params.w_smooth * d);
  }

  // Squared step lengths over pairs inside the window.
  for (int i = window.lo; i <= window.hi - 1; ++i) {
    const Vec3 d = pos[static_cast<std::size_t>(i + 1 - window.lo)] -
                   pos[static_cast<std::size_t>(i - window.lo)];
    cost += params.w_len * d.squaredNorm();
    add_grad(i, -2.0 * params.w_len * d);
    add_grad(i + 1, 2.0 * params.w_len * d);
  }
  return cost;
}

WindowReport optimize_window(TimedPath& path, const Window& window,
                             const IkdTree::Snapshot& tree,
                             const WindowCostParams& params) {
  WindowReport report;
  report.lo = window.lo;
  report.hi = window.hi;

  const int n_free = window.free_count();
  if (n_free <= 0) {
    report.converged = true;
    return report;
  }

  Eigen::VectorXd x0(3 * n_free);
  for (int f = 0; f < n_free; ++f) {
    x0.segment<3>(3 * f) =
        path.points[static_cast<std::size_t>(window.first_free() + f)].position;
  }

  lbfgs::Options opts;
  opts.max_iterations = params.max_iterations;
  opts.history = params.history;
  opts.gradient_tolerance = params.gradient_tolerance;
  opts.cost_tolerance = params.cost_tolerance;
  const lbfgs::Result res = lbfgs::minimize(
      [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        return window_cost(x, path, window, tree, params, &grad);
      },
      x0, opts);

  for (int f = 0; f < n_free; ++f) {
    path.points[static_cast<std::size_t>(window.first_free() + f)].position =
        res.x.segment<3>(3 * f);
  }
  report.iterations = res.iterations;
  report.final_cost = res.cost;
  report.converged = res.converged;
  for (int i = window.first_free(); i <= window.last_free(); ++i) {
    report.min_clearance = std::min(
        report.min_clearance,
        tree->nearest_distance(path.points[static_cast<std::size_t>(i)].position));
  }
  return report;
}

void bspline_reconnect(TimedPath& path, const std::vector<Window>& windows,
                       int degree) {
  for (const auto& w : windows) {
    const int n = w.size();
    if (degree >= n) {
      throw DomainError("bspline_reconnect: degree must be below the control-point count");
    }
    std::vector<Vec3> ctrl(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      ctrl[static_cast<std::size_t>(i)] =
          path.points[static_cast<std::size_t>(w.lo + i)].position;
    }
    const BSplineCurve curve(ctrl, degree);
    for (int i = 1; i + 1 < n; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(n - 1);
      path.points[static_cast<std::size_t>(w.lo + i)].position = curve.evaluate(t);
    }
    // Clamped ends interpolate the boundary exactly; keep them bit-identical.
  }
}

namespace {

// Clamp interior speeds so ramps to the frozen window boundary stay feasible.
void enforce_window_ramps(TimedPath& path, const Window& w, const SafetyParams& params) {
  for (int i = w.lo; i < w.hi; ++i) {
    const auto& a = path.points[static_cast<std::size_t>(i)];
    auto& b = path.points[static_cast<std::size_t>(i + 1)];
    const double ds = (b.position - a.position).norm();
    const double cap = std::sqrt(a.v * a.v + 2.0 * params.a_max * ds);
    if (i + 1 <= w.last_free() && i + 1 >= w.first_free()) b.v = std::min(b.v, cap);
  }
  for (int i = w.hi; i > w.lo; --i) {
    auto& a = path.points[static_cast<std::size_t>(i - 1)];
    const auto& b = path.points[static_cast<std::size_t>(i)];
    const double ds = (b.position - a.position).norm();
    const double cap = std::sqrt(b.v * b.v + 2.0 * params.a_max * ds);
    if (i - 1 >= w.first_free() && i - 1 <= w.last_free()) a.v = std::min(a.v, cap);
  }
}

// Replace window interior positions with an arc-length resampled A* polyline
// between the inner frozen anchors.
bool seed_window_with_astar(TimedPath& path, const Window& w,
                            const IkdTree::Snapshot& tree,
                            const SwoptParams& params) {
  if (params.elevation == nullptr || !w.has_free()) return false;
  const SearchGrid grid = build_search_grid(*params.elevation, params.z_offset,
                                            tree, params.astar);
  const Vec3& a = path.points[static_cast<std::size_t>(w.lo + 1)].position;
  const Vec3& b = path.points[static_cast<std::size_t>(w.hi - 1)].position;
  const auto start = grid.nearest_cell(a.x(), a.y());
  const auto goal = grid.nearest_cell(b.x(), b.y());
  if (start == goal) return false;

  AStarResult result;
  try {
    result = astar_search(grid, start, goal, tree, params.astar);
  } catch (const UnreachableError&) {
    return false;
  } catch (const DomainError&) {
    return false;  // blocked endpoint; leave the current guess in place
  }

  // Polyline through the anchors and the searched cells.
  std::vector<Vec3> line;
  line.reserve(result.points.size() + 2);
  line.push_back(a);
  for (const auto& p : result.points) line.push_back(p);
  line.push_back(b);
  std::vector<double> arc(line.size(), 0.0);
  for (std::size_t i = 1; i < line.size(); ++i) {
    arc[i] = arc[i - 1] + (line[i] - line[i - 1]).norm();
  }
  const double total = arc.back();
  if (total <= 1e-12) return false;

  const int n_free = w.free_count();
  std::size_t seg = 0;
  for (int f = 0; f < n_free; ++f) {
    const double target = total * static_cast<double>(f + 1) /
                          static_cast<double>(n_free + 1);
    while (seg + 1 < arc.size() && arc[seg + 1] < target) ++seg;
    const double span = arc[seg + 1] - arc[seg];
    const double t = span > 1e-12 ? (target - arc[seg]) / span : 0.0;
    path.points[static_cast<std::size_t>(w.first_free() + f)].position =
        line[seg] + t * (line[seg + 1] - line[seg]);
  }
  return true;
}

bool window_in_collision(const TimedPath& path, const Window& w,
                         const IkdTree::Snapshot& tree, double clearance) {
  for (int i = w.first_free(); i <= w.last_free(); ++i) {
    if (tree->nearest_distance(path.points[static_cast<std::size_t>(i)].position) <
        clearance) {
      return true;
    }
  }
  return false;
}

}  // namespace

SwoptResult ikd_swopt(const TimedPath& path, IkdTree& tree,
                      const ObstacleUpdate& update, const SwoptParams& params) {
  SwoptResult result;
  result.path = path;
  if (update.empty()) return result;

  tree.insert(update.insert_points);
  for (const auto& box : update.remove_boxes) tree.remove_box(box);

  if (result.path.size() < static_cast<std::size_t>(2 * params.safety.half_width + 1)) {
    return result;  // too short to window; nothing to refine
  }

  for (int pass = 0; pass < params.max_passes; ++pass) {
    const auto t_start = std::chrono::steady_clock::now();
    const IkdTree::Snapshot snap = tree.snapshot();
    const std::vector<Window> windows =
        identify_noncompliant(result.path, snap, params.safety);
    if (windows.empty()) {
      result.compliant = true;
      break;
    }
    result.compliant = false;

    PassReport pass_report;
    for (const auto& w : windows) pass_report.reoptimized_waypoints += w.size();

    auto process_window = [&](const Window& w, TimedPath& p) {
      bool seeded = false;
      if (window_in_collision(p, w, snap, params.astar.hard_clearance)) {
        seeded = seed_window_with_astar(p, w, snap, params);
      }
      WindowReport rep = optimize_window(p, w, snap, params.cost);
      rep.seeded = seeded;
      if (w.has_free() && rep.min_clearance < params.astar.hard_clearance && !seeded) {
        rep.infeasible = true;
      }
      return rep;
    };

    if (params.parallel_windows && windows.size() > 1) {
      // Windows are disjoint and share only the snapshot; run each on a copy
      // of its span and merge in index order for deterministic output.
      std::vector<std::future<std::pair<WindowReport, std::vector<TimedPoint>>>> jobs;
      jobs.reserve(windows.size());
      for (const auto& w : windows) {
        jobs.push_back(std::async(std::launch::async, [&, w]() {
          TimedPath local = result.path;
          WindowReport rep = process_window(w, local);
          std::vector<TimedPoint> span(
              local.points.begin() + w.lo, local.points.begin() + w.hi + 1);
          return std::make_pair(rep, std::move(span));
        }));
      }
      for (std::size_t wi = 0; wi < windows.size(); ++wi) {
        auto [rep, span] = jobs[wi].get();
        const Window& w = windows[wi];
        for (int i = 0; i < w.size(); ++i) {
          result.path.points[static_cast<std::size_t>(w.lo + i)] =
              span[static_cast<std::size_t>(i)];
        }
        pass_report.windows.push_back(rep);
      }
    } else {
      for (const auto& w : windows) {
        pass_report.windows.push_back(process_window(w, result.path));
      }
    }

    bspline_reconnect(result.path, windows, params.bspline_degree);
    for (const auto& w : windows) {
      enforce_window_ramps(result.path, w, params.safety);
      for (int i = w.first_free(); i <= w.last_free() && w.has_free(); ++i) {
        result.path.points[static_cast<std::size_t>(i)].window_id =
            static_cast<int>(&w - windows.data());
      }
    }
    for (const auto& rep : pass_report.windows) {
      if (rep.infeasible) result.infeasible = true;
    }
    pass_report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                  t_start)
            .count();
    result.passes.push_back(std::move(pass_report));
  }
  return result;
}

}  // namespace shift
