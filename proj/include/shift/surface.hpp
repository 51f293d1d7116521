#pragma once

#include "shift/bspline.hpp"
#include "shift/elevation_map.hpp"
#include "shift/types.hpp"

#include <set>
#include <utility>
#include <vector>

namespace shift {

/// Position and first/second partial derivatives of S(u,v) at one parameter.
struct SurfaceJet {
  Vec3 position;
  Vec3 su, sv;
  Vec3 suu, suv, svv;
};

/// First and second fundamental form coefficients with the unit normal.
struct FundamentalForms {
  double E = 0.0, F = 0.0, G = 0.0;
  double L = 0.0, M = 0.0, N = 0.0;
  Vec3 normal{Vec3::Zero()};
};

struct CurvatureSample {
  double gaussian = 0.0;  // K, 1/m^2
  double mean = 0.0;      // H, 1/m
  int i = 0;              // control-grid index along u
  int j = 0;              // control-grid index along v
};

struct CurvatureThresholds {
  double k_th = 0.0;
  double h_th = 0.0;
  double alpha_k = 2.0;
  double beta_h = 2.0;
  double mu_k = 0.0, sigma_k = 0.0;
  double mu_h = 0.0, sigma_h = 0.0;
};

using GridIndex = std::pair<int, int>;  // (i along u, j along v)

/// Clamped tensor-product B-spline surface. Parameterized by normalized
/// world (x,y): u = (x - x0)/(x1 - x0), v = (y - y0)/(y1 - y0).
class ParametricSurface {
 public:
  ParametricSurface(std::vector<Vec3> control_grid, int num_ctrl_u,
                    int num_ctrl_v, int degree_u, int degree_v,
                    Vec2 world_min, Vec2 world_max);

  /// Exact spline position and partials via the de Boor derivative recursion.
  /// Throws DomainError outside [0,1]^2.
  SurfaceJet evaluate(double u, double v) const;

  Vec3 position(double u, double v) const { return evaluate(u, v).position; }

  /// Greville abscissa of control column i (u axis) / row j (v axis); the
  /// parameter location naturally associated with that control point.
  double greville_u(int i) const;
  double greville_v(int j) const;

  int num_ctrl_u() const { return num_ctrl_u_; }
  int num_ctrl_v() const { return num_ctrl_v_; }
  int degree_u() const { return degree_u_; }
  int degree_v() const { return degree_v_; }

  const Vec3& control_point(int i, int j) const;
  void set_control_point(int i, int j, const Vec3& p);
  const std::vector<Vec3>& control_grid() const { return ctrl_; }

  Vec2 world_min() const { return world_min_; }
  Vec2 world_max() const { return world_max_; }
  double world_extent_x() const { return world_max_.x() - world_min_.x(); }
  double world_extent_y() const { return world_max_.y() - world_min_.y(); }

  /// Map world (x,y) into the parameter square.
  Vec2 world_to_uv(double x, double y) const;

 private:
  std::vector<Vec3> ctrl_;  // row-major: index = i * num_ctrl_v + j
  std::vector<double> knots_u_, knots_v_;
  int num_ctrl_u_, num_ctrl_v_;
  int degree_u_, degree_v_;
  Vec2 world_min_, world_max_;
};

struct SurfaceFitParams {
  int degree = 3;
  int num_ctrl_u = 10;
  int num_ctrl_v = 10;
  double regularization = 1e-6;  // thin-plate weight on the control grid
};

struct SurfaceFit {
  ParametricSurface surface;
  double rms_residual = 0.0;
};

/// Least-squares tensor-product spline fit of the cloud. Throws FittingError
/// on a degenerate footprint or when the control grid exceeds sample support.
SurfaceFit fit_surface(const PointCloud& cloud, const SurfaceFitParams& params);

/// Forms at (u,v). Throws SingularityError when ||S_u x S_v|| <= tolerance.
FundamentalForms fundamental_forms(const SurfaceJet& jet,
                                   double tolerance = 1e-12);
FundamentalForms fundamental_forms(const ParametricSurface& surface, double u,
                                   double v, double tolerance = 1e-12);

/// K = (LN - M^2)/(EG - F^2), H = (EN + GL - 2FM)/(2(EG - F^2)).
/// Throws SingularityError when the metric determinant <= tolerance.
CurvatureSample curvature(const FundamentalForms& forms,
                          double tolerance = 1e-12);

/// Curvature sampled at the Greville abscissae, one sample per control point,
/// indexed like the control grid. Singular samples are skipped.
std::vector<CurvatureSample> curvature_field(const ParametricSurface& surface);

/// Mean/stddev of K and H over the samples; thresholds mu + alpha*sigma.
/// Throws DomainError on fewer than 2 samples.
CurvatureThresholds compute_thresholds(const std::vector<CurvatureSample>& samples,
                                       double alpha_k, double beta_h);

/// Indices where |K| > K_th or |H| > H_th.
std::set<GridIndex> classify_outliers(const std::vector<CurvatureSample>& samples,
                                      const CurvatureThresholds& thresholds);

struct SmoothResult {
  ParametricSurface surface;
  int iterations = 0;
  bool converged = false;
};

/// Move each flagged control point by lambda * (4-neighbor mean - point),
/// iterating until max|K| and max|H| over the flagged cells drop below the
/// thresholds or max_iters is reached. Statistics are recomputed per
/// iteration; the thresholds stay frozen.
SmoothResult laplacian_smooth(const ParametricSurface& surface,
                              const std::set<GridIndex>& outliers,
                              const CurvatureThresholds& thresholds,
                              double lambda_s, int max_iters = 50);

/// Removal heuristic: drop cloud points whose parameter cell is flagged and
/// refit. The config-selectable alternative to laplacian_smooth.
SurfaceFit remove_and_refit(const PointCloud& cloud,
                            const ParametricSurface& surface,
                            const std::set<GridIndex>& outliers,
                            const SurfaceFitParams& params);

/// Evaluate z over a regular world-space grid at the given resolution.
/// Throws DomainError when the resolution exceeds the footprint.
ElevationMap extract_elevation(const ParametricSurface& surface,
                               double resolution,
                               Interpolation interpolation = Interpolation::kBilinear);

}  // namespace shift
