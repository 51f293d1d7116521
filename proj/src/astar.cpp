#include "shift/astar.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace shift {

std::pair<int, int> SearchGrid::nearest_cell(double x, double y) const {
  const int j = std::clamp(
      static_cast<int>(std::round((x - origin.x()) / resolution)), 0, cols - 1);
  const int i = std::clamp(
      static_cast<int>(std::round((y - origin.y()) / resolution)), 0, rows - 1);
  return {i, j};
}

SearchGrid build_search_grid(const ElevationMap& map, double z_offset,
                             const IkdTree::Snapshot& tree,
                             const AStarCostParams& params) {
  SearchGrid grid;
  grid.origin = map.origin();
  grid.resolution = map.resolution();
  grid.rows = map.rows();
  grid.cols = map.cols();
  grid.z.resize(static_cast<std::size_t>(grid.rows) * static_cast<std::size_t>(grid.cols));
  grid.blocked.assign(grid.z.size(), 0);
  for (int i = 0; i < grid.rows; ++i) {
    for (int j = 0; j < grid.cols; ++j) {
      const std::size_t idx = grid.index(i, j);
      if (!map.valid(i, j)) {
        grid.z[idx] = 0.0;
        grid.blocked[idx] = 1;
        continue;
      }
      grid.z[idx] = map.at(i, j) + z_offset;
      const double d = tree->nearest_distance(grid.cell_center(i, j));
      if (d < params.hard_clearance) grid.blocked[idx] = 1;
    }
  }
  return grid;
}

namespace {

struct OpenEntry {
  double f;
  double h;
  std::size_t idx;
};

struct OpenCompare {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    return a.idx > b.idx;  // lexicographic cell index, deterministic
  }
};

}  // namespace

AStarResult astar_search(const SearchGrid& grid, std::pair<int, int> start,
                         std::pair<int, int> goal,
                         const IkdTree::Snapshot& tree,
                         const AStarCostParams& params) {
  const auto [si, sj] = start;
  const auto [gi, gj] = goal;
  if (!grid.in_bounds(si, sj) || !grid.in_bounds(gi, gj)) {
    throw DomainError("astar_search: endpoint outside grid");
  }
  if (start == goal) throw DomainError("astar_search: start equals goal");

  const std::size_t n_cells = grid.z.size();
  std::vector<double> clearance(n_cells, -1.0);
  auto cell_clearance = [&](int i, int j) {
    const std::size_t idx = grid.index(i, j);
    if (clearance[idx] < 0.0) {
      clearance[idx] = tree->nearest_distance(grid.cell_center(i, j));
    }
    return clearance[idx];
  };
  auto passable = [&](int i, int j) {
    return !grid.blocked[grid.index(i, j)] &&
           cell_clearance(i, j) >= params.hard_clearance;
  };

  if (!passable(si, sj) || !passable(gi, gj)) {
    throw DomainError("astar_search: start or goal blocked");
  }

  const double res = grid.resolution;
  auto heuristic = [&](int i, int j) {
    const double dx = static_cast<double>(j - gj) * res;
    const double dy = static_cast<double>(i - gi) * res;
    return std::hypot(dx, dy);
  };

  std::vector<double> g(n_cells, kInfinity);
  std::vector<int> parent(n_cells, -1);
  std::vector<std::uint8_t> closed(n_cells, 0);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenCompare> open;

  const std::size_t start_idx = grid.index(si, sj);
  const std::size_t goal_idx = grid.index(gi, gj);
  g[start_idx] = 0.0;
  open.push({heuristic(si, sj), heuristic(si, sj), start_idx});

  const int di[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
  const int dj[8] = {-1, 0, 1, -1, 1, -1, 0, 1};

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (closed[top.idx]) continue;
    closed[top.idx] = 1;
    if (top.idx == goal_idx) break;

    const int ci = static_cast<int>(top.idx) / grid.cols;
    const int cj = static_cast<int>(top.idx) % grid.cols;
    for (int k = 0; k < 8; ++k) {
      const int ni = ci + di[k];
      const int nj = cj + dj[k];
      if (!grid.in_bounds(ni, nj)) continue;
      const std::size_t nidx = grid.index(ni, nj);
      if (closed[nidx] || grid.blocked[nidx]) continue;
      const double d = cell_clearance(ni, nj);
      if (d < params.hard_clearance) continue;
      const double step = (di[k] != 0 && dj[k] != 0) ? res * std::sqrt(2.0) : res;
      const double cost = step + params.alpha_clear / (d + params.epsilon_d);
      const double candidate = g[top.idx] + cost;
      if (candidate < g[nidx]) {
        g[nidx] = candidate;
        parent[nidx] = static_cast<int>(top.idx);
        const double h = heuristic(ni, nj);
        open.push({candidate + h, h, nidx});
      }
    }
  }

  if (!closed[goal_idx]) {
    throw UnreachableError("astar_search: goal unreachable");
  }

  AStarResult result;
  result.cost = g[goal_idx];
  std::vector<std::size_t> chain;
  for (int idx = static_cast<int>(goal_idx); idx >= 0;
       idx = parent[static_cast<std::size_t>(idx)]) {
    chain.push_back(static_cast<std::size_t>(idx));
  }
  std::reverse(chain.begin(), chain.end());
  result.cells.reserve(chain.size());
  result.points.reserve(chain.size());
  result.clearances.reserve(chain.size());
  for (const std::size_t idx : chain) {
    const int i = static_cast<int>(idx) / grid.cols;
    const int j = static_cast<int>(idx) % grid.cols;
    result.cells.emplace_back(i, j);
    result.points.push_back(grid.cell_center(i, j));
    result.clearances.push_back(cell_clearance(i, j));
  }
  return result;
}

ClearanceStats path_clearance(const std::vector<Vec3>& path,
                              const IkdTree::Snapshot& tree) {
  if (path.empty()) throw DomainError("path_clearance: empty path");
  ClearanceStats stats;
  if (tree->empty()) return stats;  // +infinity sentinels
  double sum = 0.0;
  stats.min = kInfinity;
  for (const auto& p : path) {
    const double d = tree->nearest_distance(p);
    stats.min = std::min(stats.min, d);
    sum += d;
  }
  stats.mean = sum / static_cast<double>(path.size());
  return stats;
}

}  // namespace shift
