#include "shift/landmark.hpp"

#include <algorithm>
#include <cmath>

namespace shift {

LandmarkGrid grid_landmarks(const ParametricSurface& surface, double spacing) {
  if (spacing <= 0.0) throw DomainError("grid_landmarks: spacing must be positive");
  const double lx = surface.world_extent_x();
  const double ly = surface.world_extent_y();
  if (spacing > lx || spacing > ly) {
    throw DomainError("grid_landmarks: spacing larger than surface footprint");
  }
  const int steps_u = std::max(1, static_cast<int>(std::round(lx / spacing)));
  const int steps_v = std::max(1, static_cast<int>(std::round(ly / spacing)));

  LandmarkGrid grid;
  grid.n_u = steps_u + 1;
  grid.n_v = steps_v + 1;
  grid.du = 1.0 / steps_u;
  grid.dv = 1.0 / steps_v;
  grid.points.resize(static_cast<std::size_t>(grid.n_u) * static_cast<std::size_t>(grid.n_v));
  grid.valid.assign(grid.points.size(), 1);
  for (int i = 0; i < grid.n_u; ++i) {
    const double u = std::min(1.0, i * grid.du);
    for (int j = 0; j < grid.n_v; ++j) {
      const double v = std::min(1.0, j * grid.dv);
      grid.points[grid.idx(i, j)] = surface.position(u, v);
    }
  }
  grid.adjusted_points = grid.points;
  grid.z_offset = 0.0;
  return grid;
}

LandmarkGrid apply_offset(const LandmarkGrid& grid, double z_offset) {
  if (z_offset < 0.0) throw DomainError("apply_offset: z_offset must be >= 0");
  LandmarkGrid out = grid;
  out.z_offset = z_offset;
  const Vec3 offset(0.0, 0.0, z_offset);
  for (std::size_t k = 0; k < out.points.size(); ++k) {
    out.adjusted_points[k] = out.points[k] + offset;
  }
  return out;
}

CoveragePath boustrophedon_order(const LandmarkGrid& grid, bool transpose) {
  if (grid.points.empty()) throw DomainError("boustrophedon_order: empty grid");

  // Default: a row holds one v index and sweeps along u.
  const int n_rows = transpose ? grid.n_u : grid.n_v;
  const int n_cols = transpose ? grid.n_v : grid.n_u;

  CoveragePath path;
  path.waypoints.reserve(grid.points.size());
  path.row_reversed.resize(static_cast<std::size_t>(n_rows));
  for (int r = 0; r < n_rows; ++r) {
    const bool reversed = (r % 2) != 0;
    path.row_reversed[static_cast<std::size_t>(r)] = reversed ? 1 : 0;
    for (int step = 0; step < n_cols; ++step) {
      const int c = reversed ? (n_cols - 1 - step) : step;
      const int i = transpose ? r : c;
      const int j = transpose ? c : r;
      if (!grid.cell_valid(i, j)) continue;
      path.waypoints.push_back({grid.adjusted(i, j), r, c});
    }
  }
  return path;
}

}  // namespace shift
