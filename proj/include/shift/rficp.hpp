#pragma once

#include "shift/landmark.hpp"
#include "shift/types.hpp"

#include <vector>

namespace shift {

/// Semantic attribute grid, aligned cell-for-cell with an ElevationMap.
struct SemanticField {
  Vec2 origin{Vec2::Zero()};
  double resolution = 0.0;
  int rows = 0, cols = 0;
  std::vector<double> values;  // row-major, each in [0,1]

  double at(int i, int j) const {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) +
                  static_cast<std::size_t>(j)];
  }
  double& at(int i, int j) {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) +
                  static_cast<std::size_t>(j)];
  }

  /// Bilinear attribute sample. Throws DomainError outside the grid.
  double sample(double x, double y) const;
  bool inside(double x, double y) const;
};

struct CoverageParams {
  double k = 1.0;            // proportional coefficient
  double c_target = 0.1;     // target residual level
  double sigma = 0.3;        // kernel width, m
  double radius = 0.9;       // influence radius R, m
  double lambda_cov = 1.0;   // coverage-efficiency constant, 1/s
  double v_min = 0.1;        // m/s
  double v_max = 2.0;        // m/s
  double a_max = 1.0;        // m/s^2
  double delta_s = 1.0;      // unit segment length for the speed formula, m
  double ln_floor = 1e-6;    // clamp on the dwell-time logarithm argument
  // The closed form equates the disk integral with the 1D normal CDF; the
  // true planar mass 1 - exp(-R^2/2sigma^2) is available for sensitivity
  // studies.
  bool planar_disk_mass = false;

  void validate() const;
};

struct TimedPoint {
  Vec3 position;
  int row = -1, col = -1;
  double attribute = 0.0;
  double t_dwell = 0.0;   // s
  double v = 0.0;         // m/s
  bool saturated = false; // dwell-time log argument hit the clamp
  int window_id = -1;     // set by local optimization, -1 = untouched
};

struct TimedPath {
  std::vector<TimedPoint> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

struct DwellResult {
  double seconds = 0.0;
  bool saturated = false;
};

/// C_desired = k * A.
double desired_coverage(double attribute, const CoverageParams& params);

/// C_effective = k * A - C_target; may be negative (no dwell needed).
double effective_coverage(double attribute, const CoverageParams& params);

/// Truncated Gaussian diffusion kernel; zero beyond the influence radius.
double gaussian_kernel(const Vec3& p, const Vec3& p_prime, const CoverageParams& params);
double gaussian_kernel_from_distance(double distance, const CoverageParams& params);

/// Kernel mass inside the influence disk: 2*Phi(R/sigma) - 1.
double disk_mass(double radius, double sigma);
double disk_mass(const CoverageParams& params);

/// t = -(1/lambda) ln[1 - (kA - C_target)/(2 Phi(R/sigma) - 1)];
/// zero when kA <= C_target; the log argument is floored at ln_floor and the
/// clamp reported through `saturated`.
DwellResult dwell_time(double attribute, const CoverageParams& params);

/// v = delta_s / t, v_max when t = 0, clipped to [v_min, v_max].
double speed(double attribute, const CoverageParams& params);

/// Per-waypoint dwell and speed from bilinear attribute samples, followed by
/// a forward-backward pass enforcing |v_{i+1}^2 - v_i^2| <= 2 a_max ds.
/// Throws DomainError when a waypoint leaves the field.
TimedPath allocate_velocities(const CoveragePath& path, const SemanticField& field,
                              const CoverageParams& params);

}  // namespace shift
