#include "shift/elevation_map.hpp"

#include <algorithm>
#include <cmath>

namespace shift {

ElevationMap::ElevationMap(Vec2 origin, double resolution, int rows, int cols,
                           Interpolation interpolation)
    : origin_(origin),
      resolution_(resolution),
      rows_(rows),
      cols_(cols),
      interpolation_(interpolation),
      z_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0),
      valid_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 1) {
  if (resolution <= 0.0) throw DomainError("ElevationMap: resolution must be positive");
  if (rows < 2 || cols < 2) throw DomainError("ElevationMap: need at least a 2x2 grid");
}

std::size_t ElevationMap::index(int i, int j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) {
    throw DomainError("ElevationMap: node index out of range");
  }
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
         static_cast<std::size_t>(j);
}

bool ElevationMap::inside(double x, double y) const {
  if (x < origin_.x() || x > max_x() || y < origin_.y() || y > max_y()) {
    return false;
  }
  const double fx = (x - origin_.x()) / resolution_;
  const double fy = (y - origin_.y()) / resolution_;
  const int j0 = std::min(static_cast<int>(fx), cols_ - 2);
  const int i0 = std::min(static_cast<int>(fy), rows_ - 2);
  return valid(i0, j0) && valid(i0, j0 + 1) && valid(i0 + 1, j0) &&
         valid(i0 + 1, j0 + 1);
}

double ElevationMap::query(double x, double y) const {
  return query(x, y, interpolation_);
}

double ElevationMap::query(double x, double y, Interpolation interpolation) const {
  if (x < origin_.x() || x > max_x() || y < origin_.y() || y > max_y()) {
    throw DomainError("ElevationMap::query: point outside grid");
  }
  return interpolation == Interpolation::kBilinear ? bilinear(x, y) : bicubic(x, y);
}

double ElevationMap::bilinear(double x, double y) const {
  const double fx = (x - origin_.x()) / resolution_;
  const double fy = (y - origin_.y()) / resolution_;
  const int j0 = std::min(static_cast<int>(fx), cols_ - 2);
  const int i0 = std::min(static_cast<int>(fy), rows_ - 2);
  const double tx = fx - j0;
  const double ty = fy - i0;
  if (!(valid(i0, j0) && valid(i0, j0 + 1) && valid(i0 + 1, j0) &&
        valid(i0 + 1, j0 + 1))) {
    throw DomainError("ElevationMap::query: invalid cell");
  }
  const double z00 = at(i0, j0);
  const double z01 = at(i0, j0 + 1);
  const double z10 = at(i0 + 1, j0);
  const double z11 = at(i0 + 1, j0 + 1);
  return (1.0 - ty) * ((1.0 - tx) * z00 + tx * z01) +
         ty * ((1.0 - tx) * z10 + tx * z11);
}

namespace {

// Keys cubic convolution kernel weights (a = -1/2); interpolating at nodes.
inline double cubic_weight(double s) {
  const double a = -0.5;
  const double x = std::abs(s);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

}  // namespace

double ElevationMap::bicubic(double x, double y) const {
  const double fx = (x - origin_.x()) / resolution_;
  const double fy = (y - origin_.y()) / resolution_;
  const int j0 = std::min(static_cast<int>(fx), cols_ - 2);
  const int i0 = std::min(static_cast<int>(fy), rows_ - 2);
  const double tx = fx - j0;
  const double ty = fy - i0;

  double value = 0.0;
  double weight_sum = 0.0;
  for (int di = -1; di <= 2; ++di) {
    const int i = std::clamp(i0 + di, 0, rows_ - 1);
    const double wy = cubic_weight(ty - di);
    for (int dj = -1; dj <= 2; ++dj) {
      const int j = std::clamp(j0 + dj, 0, cols_ - 1);
      if (!valid(i, j)) throw DomainError("ElevationMap::query: invalid cell");
      const double w = wy * cubic_weight(tx - dj);
      value += w * at(i, j);
      weight_sum += w;
    }
  }
  return value / weight_sum;
}

}  // namespace shift
