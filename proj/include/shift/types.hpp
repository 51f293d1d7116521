#pragma once

#include <Eigen/Core>

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace shift {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Raised when an input file or configuration value is malformed.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when surface fitting preconditions fail (degenerate footprint,
/// over-parameterized control grid, singular normal equations).
struct FittingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when evaluating outside a parametric or grid domain.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised at singular surface points (vanishing normal or metric).
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a grid search cannot connect start and goal.
struct UnreachableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unordered 3D point set, optionally carrying a per-point attribute in [0,1].
struct PointCloud {
  std::vector<Vec3> points;
  std::vector<double> attributes;  // empty, or one entry per point

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_attributes() const { return !attributes.empty(); }
};

/// Axis-aligned box, inclusive bounds.
struct Aabb {
  Vec3 min{Vec3::Zero()};
  Vec3 max{Vec3::Zero()};

  bool contains(const Vec3& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() &&
           p.y() <= max.y() && p.z() >= min.z() && p.z() <= max.z();
  }
};

}  // namespace shift
