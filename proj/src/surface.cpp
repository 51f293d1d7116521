#include "shift/surface.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace shift {

ParametricSurface::ParametricSurface(std::vector<Vec3> control_grid,
                                     int num_ctrl_u, int num_ctrl_v,
                                     int degree_u, int degree_v, Vec2 world_min,
                                     Vec2 world_max)
    : ctrl_(std::move(control_grid)),
      num_ctrl_u_(num_ctrl_u),
      num_ctrl_v_(num_ctrl_v),
      degree_u_(degree_u),
      degree_v_(degree_v),
      world_min_(world_min),
      world_max_(world_max) {
  if (degree_u_ < 3 || degree_v_ < 3) {
    throw DomainError("ParametricSurface: degree must be >= 3 so second derivatives exist");
  }
  if (num_ctrl_u_ < degree_u_ + 1 || num_ctrl_v_ < degree_v_ + 1) {
    throw DomainError("ParametricSurface: control counts must be >= degree+1");
  }
  if (ctrl_.size() != static_cast<std::size_t>(num_ctrl_u_) * static_cast<std::size_t>(num_ctrl_v_)) {
    throw DomainError("ParametricSurface: control grid size mismatch");
  }
  knots_u_ = clamped_uniform_knots(degree_u_, num_ctrl_u_, 0.0, 1.0);
  knots_v_ = clamped_uniform_knots(degree_v_, num_ctrl_v_, 0.0, 1.0);
}

const Vec3& ParametricSurface::control_point(int i, int j) const {
  return ctrl_[static_cast<std::size_t>(i) * static_cast<std::size_t>(num_ctrl_v_) +
               static_cast<std::size_t>(j)];
}

void ParametricSurface::set_control_point(int i, int j, const Vec3& p) {
  ctrl_[static_cast<std::size_t>(i) * static_cast<std::size_t>(num_ctrl_v_) +
        static_cast<std::size_t>(j)] = p;
}

double ParametricSurface::greville_u(int i) const {
  double sum = 0.0;
  for (int k = 1; k <= degree_u_; ++k) sum += knots_u_[static_cast<std::size_t>(i + k)];
  return sum / degree_u_;
}

double ParametricSurface::greville_v(int j) const {
  double sum = 0.0;
  for (int k = 1; k <= degree_v_; ++k) sum += knots_v_[static_cast<std::size_t>(j + k)];
  return sum / degree_v_;
}

Vec2 ParametricSurface::world_to_uv(double x, double y) const {
  return {(x - world_min_.x()) / world_extent_x(),
          (y - world_min_.y()) / world_extent_y()};
}

SurfaceJet ParametricSurface::evaluate(double u, double v) const {
  if (u < 0.0 || u > 1.0 || v < 0.0 || v > 1.0) {
    throw DomainError("ParametricSurface::evaluate: (u,v) outside domain");
  }
  const int su = find_span(knots_u_, degree_u_, num_ctrl_u_, u);
  const int sv = find_span(knots_v_, degree_v_, num_ctrl_v_, v);
  const auto bu = basis_derivatives(knots_u_, degree_u_, su, u, 2);
  const auto bv = basis_derivatives(knots_v_, degree_v_, sv, v, 2);

  Vec3 d[3][3];
  for (auto& row : d) {
    for (auto& e : row) e = Vec3::Zero();
  }
  for (int r = 0; r <= degree_u_; ++r) {
    const int iu = su - degree_u_ + r;
    for (int s = 0; s <= degree_v_; ++s) {
      const int iv = sv - degree_v_ + s;
      const Vec3& p = control_point(iu, iv);
      for (int a = 0; a <= 2; ++a) {
        for (int b = 0; b + a <= 2; ++b) {
          d[a][b] += bu[static_cast<std::size_t>(a)][static_cast<std::size_t>(r)] *
                     bv[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)] * p;
        }
      }
    }
  }
  SurfaceJet jet;
  jet.position = d[0][0];
  jet.su = d[1][0];
  jet.sv = d[0][1];
  jet.suu = d[2][0];
  jet.suv = d[1][1];
  jet.svv = d[0][2];
  return jet;
}

namespace {

int count_distinct(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end());
  int count = values.empty() ? 0 : 1;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] - values[k - 1] > tol) ++count;
  }
  return count;
}

// Accumulate rho * (d^T d) for a sparse difference row into the normal matrix.
void add_penalty_row(Eigen::MatrixXd& ata, const std::vector<int>& cols,
                     const std::vector<double>& coeffs, double rho) {
  for (std::size_t a = 0; a < cols.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      ata(cols[a], cols[b]) += rho * coeffs[a] * coeffs[b];
    }
  }
}

}  // namespace

SurfaceFit fit_surface(const PointCloud& cloud, const SurfaceFitParams& params) {
  const int degree = params.degree;
  if (degree < 3) throw FittingError("fit_surface: degree must be >= 3");
  if (params.num_ctrl_u < degree + 1 || params.num_ctrl_v < degree + 1) {
    throw FittingError("fit_surface: control counts must be >= degree+1");
  }
  const std::size_t n_pts = cloud.size();
  const int nu = params.num_ctrl_u;
  const int nv = params.num_ctrl_v;
  const int n_coeff = nu * nv;
  if (static_cast<int>(n_pts) < n_coeff) {
    throw FittingError("fit_surface: control grid larger than sample support");
  }

  std::vector<double> xs(n_pts), ys(n_pts);
  for (std::size_t k = 0; k < n_pts; ++k) {
    const Vec3& p = cloud.points[k];
    if (!p.allFinite()) throw FittingError("fit_surface: non-finite point");
    xs[k] = p.x();
    ys[k] = p.y();
  }
  const auto [x_min_it, x_max_it] = std::minmax_element(xs.begin(), xs.end());
  const auto [y_min_it, y_max_it] = std::minmax_element(ys.begin(), ys.end());
  const double x0 = *x_min_it, x1 = *x_max_it;
  const double y0 = *y_min_it, y1 = *y_max_it;
  const double span_x = x1 - x0;
  const double span_y = y1 - y0;
  const double footprint_tol = 1e-9 * std::max({1.0, span_x, span_y});

  if (span_x <= footprint_tol || span_y <= footprint_tol) {
    throw FittingError("fit_surface: degenerate footprint");
  }
  if (count_distinct(xs, footprint_tol) < degree + 1 ||
      count_distinct(ys, footprint_tol) < degree + 1) {
    throw FittingError("fit_surface: footprint too sparse for requested degree");
  }
  // Collinearity check via the planar covariance of (x,y).
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n_pts; ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= static_cast<double>(n_pts);
  my /= static_cast<double>(n_pts);
  double cxx = 0.0, cxy = 0.0, cyy = 0.0;
  for (std::size_t k = 0; k < n_pts; ++k) {
    cxx += (xs[k] - mx) * (xs[k] - mx);
    cxy += (xs[k] - mx) * (ys[k] - my);
    cyy += (ys[k] - my) * (ys[k] - my);
  }
  const double trace = cxx + cyy;
  const double det = cxx * cyy - cxy * cxy;
  // Smaller eigenvalue of the covariance; near zero means collinear.
  const double disc = std::sqrt(std::max(0.0, trace * trace / 4.0 - det));
  const double lambda_min = trace / 2.0 - disc;
  if (lambda_min <= 1e-12 * std::max(1.0, trace)) {
    throw FittingError("fit_surface: collinear footprint");
  }

  const auto knots_u = clamped_uniform_knots(degree, nu, 0.0, 1.0);
  const auto knots_v = clamped_uniform_knots(degree, nv, 0.0, 1.0);

  Eigen::MatrixXd ata = Eigen::MatrixXd::Zero(n_coeff, n_coeff);
  Eigen::MatrixXd atb = Eigen::MatrixXd::Zero(n_coeff, 3);

  std::vector<int> cols(static_cast<std::size_t>((degree + 1) * (degree + 1)));
  std::vector<double> weights(cols.size());
  for (std::size_t k = 0; k < n_pts; ++k) {
    const double u = (xs[k] - x0) / span_x;
    const double v = (ys[k] - y0) / span_y;
    const int su = find_span(knots_u, degree, nu, u);
    const int sv = find_span(knots_v, degree, nv, v);
    const auto bu = basis_derivatives(knots_u, degree, su, u, 0);
    const auto bv = basis_derivatives(knots_v, degree, sv, v, 0);
    std::size_t m = 0;
    for (int r = 0; r <= degree; ++r) {
      for (int s = 0; s <= degree; ++s) {
        cols[m] = (su - degree + r) * nv + (sv - degree + s);
        weights[m] = bu[0][static_cast<std::size_t>(r)] * bv[0][static_cast<std::size_t>(s)];
        ++m;
      }
    }
    const Vec3& q = cloud.points[k];
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        ata(cols[a], cols[b]) += weights[a] * weights[b];
      }
      atb.row(cols[a]) += weights[a] * q.transpose();
    }
  }

  // Thin-plate style penalty: second-difference stencils on the Greville
  // abscissae so affine functions stay penalty-free despite the non-uniform
  // clamped-end spacing.
  const double rho = params.regularization;
  if (rho > 0.0) {
    auto greville = [&](const std::vector<double>& knots, int idx) {
      double sum = 0.0;
      for (int k = 1; k <= degree; ++k) sum += knots[static_cast<std::size_t>(idx + k)];
      return sum / degree;
    };
    // Zero on affine data, and O(h^2 f'') like the plain (1,-2,1) stencil so
    // the default weight stays a gentle tie-breaker.
    auto second_diff = [&](const std::vector<double>& knots, int idx,
                           std::vector<double>& coeffs) {
      const double h1 = greville(knots, idx) - greville(knots, idx - 1);
      const double h2 = greville(knots, idx + 1) - greville(knots, idx);
      coeffs = {2.0 * h2 / (h1 + h2), -2.0, 2.0 * h1 / (h1 + h2)};
    };
    std::vector<double> coeffs;
    for (int i = 0; i < nu; ++i) {
      for (int j = 0; j < nv; ++j) {
        const int c = i * nv + j;
        if (i >= 1 && i + 1 < nu) {
          second_diff(knots_u, i, coeffs);
          add_penalty_row(ata, {c - nv, c, c + nv}, coeffs, rho);
        }
        if (j >= 1 && j + 1 < nv) {
          second_diff(knots_v, j, coeffs);
          add_penalty_row(ata, {c - 1, c, c + 1}, coeffs, rho);
        }
        if (i + 1 < nu && j + 1 < nv) {
          add_penalty_row(ata, {c, c + 1, c + nv, c + nv + 1},
                          {1.0, -1.0, -1.0, 1.0}, 2.0 * rho);
        }
      }
    }
  }

  Eigen::LDLT<Eigen::MatrixXd> solver(ata);
  if (solver.info() != Eigen::Success) {
    throw FittingError("fit_surface: singular normal equations");
  }
  const Eigen::MatrixXd coeffs = solver.solve(atb);
  if (!coeffs.allFinite()) {
    throw FittingError("fit_surface: fit did not produce finite coefficients");
  }

  std::vector<Vec3> grid(static_cast<std::size_t>(n_coeff));
  for (int c = 0; c < n_coeff; ++c) {
    grid[static_cast<std::size_t>(c)] = coeffs.row(c).transpose();
  }
  ParametricSurface surface(std::move(grid), nu, nv, degree, degree,
                            Vec2(x0, y0), Vec2(x1, y1));

  double sq_sum = 0.0;
  for (std::size_t k = 0; k < n_pts; ++k) {
    const double u = (xs[k] - x0) / span_x;
    const double v = (ys[k] - y0) / span_y;
    sq_sum += (surface.position(u, v) - cloud.points[k]).squaredNorm();
  }
  return {std::move(surface), std::sqrt(sq_sum / static_cast<double>(n_pts))};
}

FundamentalForms fundamental_forms(const SurfaceJet& jet, double tolerance) {
  const Vec3 cross = jet.su.cross(jet.sv);
  const double cross_norm = cross.norm();
  if (cross_norm <= tolerance) {
    throw SingularityError("fundamental_forms: singular point, ||S_u x S_v|| ~ 0");
  }
  FundamentalForms forms;
  forms.normal = cross / cross_norm;
  forms.E = jet.su.dot(jet.su);
  forms.F = jet.su.dot(jet.sv);
  forms.G = jet.sv.dot(jet.sv);
  forms.L = jet.suu.dot(forms.normal);
  forms.M = jet.suv.dot(forms.normal);
  forms.N = jet.svv.dot(forms.normal);
  return forms;
}

FundamentalForms fundamental_forms(const ParametricSurface& surface, double u,
                                   double v, double tolerance) {
  return fundamental_forms(surface.evaluate(u, v), tolerance);
}

CurvatureSample curvature(const FundamentalForms& forms, double tolerance) {
  const double det = forms.E * forms.G - forms.F * forms.F;
  if (det <= tolerance) {
    throw SingularityError("curvature: singular metric, EG - F^2 ~ 0");
  }
  CurvatureSample sample;
  sample.gaussian = (forms.L * forms.N - forms.M * forms.M) / det;
  sample.mean = (forms.E * forms.N + forms.G * forms.L - 2.0 * forms.F * forms.M) /
                (2.0 * det);
  return sample;
}

std::vector<CurvatureSample> curvature_field(const ParametricSurface& surface) {
  std::vector<CurvatureSample> samples;
  samples.reserve(static_cast<std::size_t>(surface.num_ctrl_u()) *
                  static_cast<std::size_t>(surface.num_ctrl_v()));
  for (int i = 0; i < surface.num_ctrl_u(); ++i) {
    const double u = std::clamp(surface.greville_u(i), 0.0, 1.0);
    for (int j = 0; j < surface.num_ctrl_v(); ++j) {
      const double v = std::clamp(surface.greville_v(j), 0.0, 1.0);
      try {
        CurvatureSample s = curvature(fundamental_forms(surface, u, v));
        s.i = i;
        s.j = j;
        samples.push_back(s);
      } catch (const SingularityError&) {
        // skip degenerate samples
      }
    }
  }
  return samples;
}

CurvatureThresholds compute_thresholds(const std::vector<CurvatureSample>& samples,
                                       double alpha_k, double beta_h) {
  if (samples.size() < 2) {
    throw DomainError("compute_thresholds: need at least 2 samples");
  }
  const double n = static_cast<double>(samples.size());
  CurvatureThresholds th;
  th.alpha_k = alpha_k;
  th.beta_h = beta_h;
  for (const auto& s : samples) {
    th.mu_k += s.gaussian;
    th.mu_h += s.mean;
  }
  th.mu_k /= n;
  th.mu_h /= n;
  double var_k = 0.0, var_h = 0.0;
  for (const auto& s : samples) {
    var_k += (s.gaussian - th.mu_k) * (s.gaussian - th.mu_k);
    var_h += (s.mean - th.mu_h) * (s.mean - th.mu_h);
  }
  th.sigma_k = std::sqrt(var_k / n);
  th.sigma_h = std::sqrt(var_h / n);
  th.k_th = th.mu_k + alpha_k * th.sigma_k;
  th.h_th = th.mu_h + beta_h * th.sigma_h;
  return th;
}

std::set<GridIndex> classify_outliers(const std::vector<CurvatureSample>& samples,
                                      const CurvatureThresholds& thresholds) {
  std::set<GridIndex> flagged;
  for (const auto& s : samples) {
    if (std::abs(s.gaussian) > thresholds.k_th || std::abs(s.mean) > thresholds.h_th) {
      flagged.insert({s.i, s.j});
    }
  }
  return flagged;
}

namespace {

Vec3 neighbor_mean(const ParametricSurface& surface, int i, int j) {
  Vec3 sum = Vec3::Zero();
  int count = 0;
  const int di[4] = {-1, 1, 0, 0};
  const int dj[4] = {0, 0, -1, 1};
  for (int k = 0; k < 4; ++k) {
    const int ni = i + di[k];
    const int nj = j + dj[k];
    if (ni < 0 || ni >= surface.num_ctrl_u() || nj < 0 || nj >= surface.num_ctrl_v()) {
      continue;
    }
    sum += surface.control_point(ni, nj);
    ++count;
  }
  return count > 0 ? Vec3(sum / count) : surface.control_point(i, j);
}

bool flagged_below_thresholds(const ParametricSurface& surface,
                              const std::set<GridIndex>& outliers,
                              const CurvatureThresholds& thresholds) {
  for (const auto& [i, j] : outliers) {
    const double u = std::clamp(surface.greville_u(i), 0.0, 1.0);
    const double v = std::clamp(surface.greville_v(j), 0.0, 1.0);
    try {
      const CurvatureSample s = curvature(fundamental_forms(surface, u, v));
      if (std::abs(s.gaussian) > thresholds.k_th || std::abs(s.mean) > thresholds.h_th) {
        return false;
      }
    } catch (const SingularityError&) {
      return false;
    }
  }
  return true;
}

}  // namespace

SmoothResult laplacian_smooth(const ParametricSurface& surface,
                              const std::set<GridIndex>& outliers,
                              const CurvatureThresholds& thresholds,
                              double lambda_s, int max_iters) {
  if (lambda_s < 0.0 || lambda_s >= 1.0) {
    throw DomainError("laplacian_smooth: lambda_s must be in [0,1)");
  }
  SmoothResult result{surface, 0, true};
  if (outliers.empty()) return result;

  result.converged = flagged_below_thresholds(result.surface, outliers, thresholds);
  while (!result.converged && result.iterations < max_iters) {
    ParametricSurface next = result.surface;
    for (const auto& [i, j] : outliers) {
      const Vec3 p = result.surface.control_point(i, j);
      const Vec3 mean = neighbor_mean(result.surface, i, j);
      next.set_control_point(i, j, p + lambda_s * (mean - p));
    }
    result.surface = std::move(next);
    ++result.iterations;
    result.converged = flagged_below_thresholds(result.surface, outliers, thresholds);
  }
  return result;
}

SurfaceFit remove_and_refit(const PointCloud& cloud,
                            const ParametricSurface& surface,
                            const std::set<GridIndex>& outliers,
                            const SurfaceFitParams& params) {
  if (outliers.empty()) return fit_surface(cloud, params);

  // Drop points whose nearest Greville node (Voronoi assignment per axis) is
  // flagged, then refit the remaining cloud.
  auto nearest_node = [](const ParametricSurface& s, double t, bool along_u) {
    const int n = along_u ? s.num_ctrl_u() : s.num_ctrl_v();
    int best = 0;
    double best_dist = kInfinity;
    for (int i = 0; i < n; ++i) {
      const double g = along_u ? s.greville_u(i) : s.greville_v(i);
      const double d = std::abs(t - g);
      if (d < best_dist) {
        best_dist = d;
        best = i;
      }
    }
    return best;
  };
  PointCloud kept;
  kept.points.reserve(cloud.size());
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    const Vec2 uv = surface.world_to_uv(cloud.points[k].x(), cloud.points[k].y());
    const int i = nearest_node(surface, uv.x(), true);
    const int j = nearest_node(surface, uv.y(), false);
    if (outliers.count({i, j}) == 0) {
      kept.points.push_back(cloud.points[k]);
      if (cloud.has_attributes()) kept.attributes.push_back(cloud.attributes[k]);
    }
  }
  return fit_surface(kept, params);
}

ElevationMap extract_elevation(const ParametricSurface& surface,
                               double resolution, Interpolation interpolation) {
  if (resolution <= 0.0) throw DomainError("extract_elevation: resolution must be positive");
  const double lx = surface.world_extent_x();
  const double ly = surface.world_extent_y();
  if (resolution > lx || resolution > ly) {
    throw DomainError("extract_elevation: resolution larger than surface footprint");
  }
  const int cols = static_cast<int>(std::floor(lx / resolution + 1e-9)) + 1;
  const int rows = static_cast<int>(std::floor(ly / resolution + 1e-9)) + 1;
  ElevationMap map(surface.world_min(), resolution, rows, cols, interpolation);
  for (int i = 0; i < rows; ++i) {
    const double v = std::min(1.0, (map.node_y(i) - surface.world_min().y()) / ly);
    for (int j = 0; j < cols; ++j) {
      const double u = std::min(1.0, (map.node_x(j) - surface.world_min().x()) / lx);
      map.at(i, j) = surface.position(u, v).z();
    }
  }
  return map;
}

}  // namespace shift
