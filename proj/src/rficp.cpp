#include "shift/rficp.hpp"

#include <algorithm>
#include <cmath>

namespace shift {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310002;
}

bool SemanticField::inside(double x, double y) const {
  return x >= origin.x() && x <= origin.x() + resolution * (cols - 1) &&
         y >= origin.y() && y <= origin.y() + resolution * (rows - 1);
}

double SemanticField::sample(double x, double y) const {
  if (!inside(x, y)) throw DomainError("SemanticField::sample: point outside field");
  const double fx = (x - origin.x()) / resolution;
  const double fy = (y - origin.y()) / resolution;
  const int j0 = std::min(static_cast<int>(fx), cols - 2);
  const int i0 = std::min(static_cast<int>(fy), rows - 2);
  const double tx = fx - j0;
  const double ty = fy - i0;
  return (1.0 - ty) * ((1.0 - tx) * at(i0, j0) + tx * at(i0, j0 + 1)) +
         ty * ((1.0 - tx) * at(i0 + 1, j0) + tx * at(i0 + 1, j0 + 1));
}

void CoverageParams::validate() const {
  if (sigma <= 0.0) throw ConfigError("coverage: sigma must be positive");
  if (radius <= 0.0) throw ConfigError("coverage: radius must be positive");
  if (lambda_cov <= 0.0) throw ConfigError("coverage: lambda_cov must be positive");
  if (v_min <= 0.0 || v_min > v_max) throw ConfigError("coverage: need 0 < v_min <= v_max");
  if (disk_mass(radius, sigma) <= 0.0) throw ConfigError("coverage: disk mass must be positive");
}

double desired_coverage(double attribute, const CoverageParams& params) {
  return params.k * attribute;
}

double effective_coverage(double attribute, const CoverageParams& params) {
  return params.k * attribute - params.c_target;
}

double gaussian_kernel_from_distance(double distance, const CoverageParams& params) {
  if (distance > params.radius) return 0.0;
  const double s = params.sigma;
  return std::exp(-(distance * distance) / (2.0 * s * s)) / (kSqrt2Pi * s);
}

double gaussian_kernel(const Vec3& p, const Vec3& p_prime, const CoverageParams& params) {
  return gaussian_kernel_from_distance((p - p_prime).norm(), params);
}

double disk_mass(double radius, double sigma) {
  // 2*Phi(R/sigma) - 1 written through the error function.
  return std::erf(radius / (sigma * std::sqrt(2.0)));
}

double disk_mass(const CoverageParams& params) {
  if (params.planar_disk_mass) {
    return 1.0 - std::exp(-(params.radius * params.radius) /
                          (2.0 * params.sigma * params.sigma));
  }
  return disk_mass(params.radius, params.sigma);
}

DwellResult dwell_time(double attribute, const CoverageParams& params) {
  const double demand = effective_coverage(attribute, params);
  if (demand <= 0.0) return {0.0, false};
  const double mass = disk_mass(params);
  double arg = 1.0 - demand / mass;
  bool saturated = false;
  if (arg < params.ln_floor) {
    arg = params.ln_floor;
    saturated = true;
  }
  return {-std::log(arg) / params.lambda_cov, saturated};
}

double speed(double attribute, const CoverageParams& params) {
  const DwellResult dwell = dwell_time(attribute, params);
  const double raw = dwell.seconds > 0.0 ? params.delta_s / dwell.seconds : params.v_max;
  return std::clamp(raw, params.v_min, params.v_max);
}

TimedPath allocate_velocities(const CoveragePath& path, const SemanticField& field,
                              const CoverageParams& params) {
  params.validate();
  TimedPath timed;
  timed.points.reserve(path.waypoints.size());
  for (const auto& wp : path.waypoints) {
    TimedPoint tp;
    tp.position = wp.position;
    tp.row = wp.row;
    tp.col = wp.col;
    tp.attribute = field.sample(wp.position.x(), wp.position.y());
    const DwellResult dwell = dwell_time(tp.attribute, params);
    tp.t_dwell = dwell.seconds;
    tp.saturated = dwell.saturated;
    tp.v = speed(tp.attribute, params);
    timed.points.push_back(tp);
  }

  // Forward-backward ramp pass over actual segment lengths.
  const std::size_t n = timed.points.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double ds = (timed.points[i + 1].position - timed.points[i].position).norm();
    const double cap = std::sqrt(timed.points[i].v * timed.points[i].v +
                                 2.0 * params.a_max * ds);
    timed.points[i + 1].v = std::min(timed.points[i + 1].v, cap);
  }
  for (std::size_t i = n; i-- > 1;) {
    const double ds = (timed.points[i].position - timed.points[i - 1].position).norm();
    const double cap = std::sqrt(timed.points[i].v * timed.points[i].v +
                                 2.0 * params.a_max * ds);
    timed.points[i - 1].v = std::min(timed.points[i - 1].v, cap);
  }
  return timed;
}

}  // namespace shift
