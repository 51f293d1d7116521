#pragma once

#include "shift/types.hpp"

#include <vector>

namespace shift {

/// Clamped knot vector on [t0, t1] for `num_ctrl` control points of the given
/// degree: end knots repeated degree+1 times, interior knots uniform.
std::vector<double> clamped_uniform_knots(int degree, int num_ctrl, double t0,
                                          double t1);

/// Index of the knot span containing t (de Boor convention).
int find_span(const std::vector<double>& knots, int degree, int num_ctrl,
              double t);

/// Nonzero basis functions and their derivatives at t.
/// Returns (max_deriv+1) x (degree+1); row d holds the d-th derivatives of
/// the degree+1 basis functions that are nonzero on the span.
std::vector<std::vector<double>> basis_derivatives(
    const std::vector<double>& knots, int degree, int span, double t,
    int max_deriv);

/// Clamped B-spline curve. Interpolates its first and last control points.
class BSplineCurve {
 public:
  BSplineCurve(std::vector<Vec3> control_points, int degree);

  Vec3 evaluate(double t) const;

  int degree() const { return degree_; }
  double t_min() const { return 0.0; }
  double t_max() const { return 1.0; }
  const std::vector<Vec3>& control_points() const { return ctrl_; }

 private:
  std::vector<Vec3> ctrl_;
  std::vector<double> knots_;
  int degree_;
};

}  // namespace shift
