#pragma once

#include "shift/elevation_map.hpp"
#include "shift/ikd_tree.hpp"
#include "shift/types.hpp"

#include <cstdint>
#include <vector>

namespace shift {

struct AStarCostParams {
  double alpha_clear = 0.5;     // weight of the inverse-distance penalty
  double epsilon_d = 0.05;      // m, keeps the penalty finite at contact
  double hard_clearance = 0.2;  // m, cells closer than this are blocked
};

/// 2.5D lattice over an elevation-map footprint: (x,y) cells with z attached
/// from the map plus the coverage offset.
struct SearchGrid {
  Vec2 origin{Vec2::Zero()};
  double resolution = 0.0;
  int rows = 0, cols = 0;
  std::vector<double> z;               // row-major cell height (already offset)
  std::vector<std::uint8_t> blocked;   // row-major

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) +
           static_cast<std::size_t>(j);
  }
  bool in_bounds(int i, int j) const {
    return i >= 0 && i < rows && j >= 0 && j < cols;
  }
  Vec3 cell_center(int i, int j) const {
    return {origin.x() + resolution * j, origin.y() + resolution * i,
            z[index(i, j)]};
  }
  /// Cell whose center is nearest to (x,y); clamped to the grid.
  std::pair<int, int> nearest_cell(double x, double y) const;
};

/// Lattice nodes at the elevation-map nodes, lifted by z_offset; cells with
/// D(center) < hard_clearance are blocked against the snapshot.
SearchGrid build_search_grid(const ElevationMap& map, double z_offset,
                             const IkdTree::Snapshot& tree,
                             const AStarCostParams& params);

struct AStarResult {
  std::vector<std::pair<int, int>> cells;
  std::vector<Vec3> points;
  std::vector<double> clearances;  // D at each cell center
  double cost = 0.0;
};

/// 8-connected A*. Per-step cost = step length + alpha/(D + eps); cells with
/// D < hard_clearance are treated as blocked; h = straight-line distance.
/// Throws UnreachableError when no path exists, DomainError on bad endpoints.
AStarResult astar_search(const SearchGrid& grid, std::pair<int, int> start,
                         std::pair<int, int> goal,
                         const IkdTree::Snapshot& tree,
                         const AStarCostParams& params);

struct ClearanceStats {
  double min = kInfinity;
  double mean = kInfinity;
};

/// Min and mean obstacle distance over the path points.
ClearanceStats path_clearance(const std::vector<Vec3>& path,
                              const IkdTree::Snapshot& tree);

}  // namespace shift
