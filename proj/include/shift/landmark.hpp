#pragma once

#include "shift/surface.hpp"
#include "shift/types.hpp"

#include <cstdint>
#include <vector>

namespace shift {

/// Landmark waypoints on the surface: p[i][j] = S(u_i, v_j), with the
/// vertically offset copy p_adj held alongside.
struct LandmarkGrid {
  int n_u = 0;  // points along u
  int n_v = 0;  // points along v
  double du = 0.0, dv = 0.0;
  double z_offset = 0.0;
  std::vector<Vec3> points;           // index = i * n_v + j
  std::vector<Vec3> adjusted_points;  // same layout
  std::vector<std::uint8_t> valid;    // same layout, 1 = usable cell

  const Vec3& at(int i, int j) const { return points[idx(i, j)]; }
  const Vec3& adjusted(int i, int j) const { return adjusted_points[idx(i, j)]; }
  bool cell_valid(int i, int j) const { return valid[idx(i, j)] != 0; }
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_v) +
           static_cast<std::size_t>(j);
  }
};

struct PathPoint {
  Vec3 position;
  int row = 0;
  int col = 0;
};

/// Boustrophedon-ordered waypoints; every valid grid cell appears once.
struct CoveragePath {
  std::vector<PathPoint> waypoints;
  std::vector<std::uint8_t> row_reversed;  // per row: 1 = traversed right-to-left
};

/// Uniform parameter grid whose world-space neighbor spacing approximates
/// `spacing`. Throws DomainError when spacing exceeds the footprint.
LandmarkGrid grid_landmarks(const ParametricSurface& surface, double spacing);

/// p_adj = p + (0, 0, z_offset) for every point.
LandmarkGrid apply_offset(const LandmarkGrid& grid, double z_offset);

/// Zigzag ordering over the adjusted points. Rows run along the u axis by
/// default; `transpose` flips the sweep. Even rows run forward, odd rows
/// backward. Invalid cells are skipped within their row.
CoveragePath boustrophedon_order(const LandmarkGrid& grid, bool transpose = false);

}  // namespace shift
