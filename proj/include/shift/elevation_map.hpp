#pragma once

#include "shift/types.hpp"

#include <cstdint>
#include <vector>

namespace shift {

enum class Interpolation { kBilinear, kBicubic };

/// Regular 2D grid of terrain heights z(x,y). Node (i,j) sits at
/// (x0 + j*resolution, y0 + i*resolution); rows follow y, columns follow x.
class ElevationMap {
 public:
  ElevationMap() = default;
  ElevationMap(Vec2 origin, double resolution, int rows, int cols,
               Interpolation interpolation = Interpolation::kBilinear);

  double& at(int i, int j) { return z_[index(i, j)]; }
  double at(int i, int j) const { return z_[index(i, j)]; }

  void set_valid(int i, int j, bool valid) { valid_[index(i, j)] = valid ? 1 : 0; }
  bool valid(int i, int j) const { return valid_[index(i, j)] != 0; }

  /// Interpolated height. Throws DomainError outside the node hull or when
  /// any supporting node is invalid.
  double query(double x, double y) const;
  double query(double x, double y, Interpolation interpolation) const;

  /// True when (x,y) lies inside the node hull and the supporting bilinear
  /// cell is fully valid.
  bool inside(double x, double y) const;

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Vec2 origin() const { return origin_; }
  double resolution() const { return resolution_; }
  Interpolation interpolation() const { return interpolation_; }

  double node_x(int j) const { return origin_.x() + resolution_ * j; }
  double node_y(int i) const { return origin_.y() + resolution_ * i; }

  double max_x() const { return node_x(cols_ - 1); }
  double max_y() const { return node_y(rows_ - 1); }

  const std::vector<double>& data() const { return z_; }
  const std::vector<std::uint8_t>& mask() const { return valid_; }

 private:
  std::size_t index(int i, int j) const;
  double bilinear(double x, double y) const;
  double bicubic(double x, double y) const;

  Vec2 origin_{Vec2::Zero()};
  double resolution_ = 0.0;
  int rows_ = 0, cols_ = 0;
  Interpolation interpolation_ = Interpolation::kBilinear;
  std::vector<double> z_;
  std::vector<std::uint8_t> valid_;
};

}  // namespace shift
