#include "shift/bspline.hpp"

#include <algorithm>
#include <cmath>

namespace shift {

std::vector<double> clamped_uniform_knots(int degree, int num_ctrl, double t0,
                                          double t1) {
  if (num_ctrl < degree + 1) {
    throw DomainError("clamped_uniform_knots: need at least degree+1 control points");
  }
  const int n_knots = num_ctrl + degree + 1;
  std::vector<double> knots(static_cast<std::size_t>(n_knots));
  const int n_interior = num_ctrl - degree - 1;
  for (int i = 0; i <= degree; ++i) knots[static_cast<std::size_t>(i)] = t0;
  for (int i = 1; i <= n_interior; ++i) {
    knots[static_cast<std::size_t>(degree + i)] =
        t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n_interior + 1);
  }
  for (int i = 0; i <= degree; ++i) {
    knots[static_cast<std::size_t>(num_ctrl + i)] = t1;
  }
  return knots;
}

int find_span(const std::vector<double>& knots, int degree, int num_ctrl,
              double t) {
  const int n = num_ctrl - 1;
  if (t >= knots[static_cast<std::size_t>(n + 1)]) return n;
  if (t <= knots[static_cast<std::size_t>(degree)]) return degree;
  int lo = degree;
  int hi = n + 1;
  int mid = (lo + hi) / 2;
  while (t < knots[static_cast<std::size_t>(mid)] ||
         t >= knots[static_cast<std::size_t>(mid + 1)]) {
    if (t < knots[static_cast<std::size_t>(mid)]) {
      hi = mid;
    } else {
      lo = mid;
    }
    mid = (lo + hi) / 2;
  }
  return mid;
}

std::vector<std::vector<double>> basis_derivatives(
    const std::vector<double>& knots, int degree, int span, double t,
    int max_deriv) {
  const int p = degree;
  const int d = std::min(max_deriv, p);

  // Triangular table of basis values and knot differences (NDU scheme).
  std::vector<std::vector<double>> ndu(static_cast<std::size_t>(p + 1),
                                       std::vector<double>(static_cast<std::size_t>(p + 1), 0.0));
  std::vector<double> left(static_cast<std::size_t>(p + 1), 0.0);
  std::vector<double> right(static_cast<std::size_t>(p + 1), 0.0);

  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[static_cast<std::size_t>(j)] = t - knots[static_cast<std::size_t>(span + 1 - j)];
    right[static_cast<std::size_t>(j)] = knots[static_cast<std::size_t>(span + j)] - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)] =
          right[static_cast<std::size_t>(r + 1)] + left[static_cast<std::size_t>(j - r)];
      const double temp = ndu[static_cast<std::size_t>(r)][static_cast<std::size_t>(j - 1)] /
                          ndu[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
      ndu[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
          saved + right[static_cast<std::size_t>(r + 1)] * temp;
      saved = left[static_cast<std::size_t>(j - r)] * temp;
    }
    ndu[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = saved;
  }

  std::vector<std::vector<double>> ders(
      static_cast<std::size_t>(max_deriv + 1),
      std::vector<double>(static_cast<std::size_t>(p + 1), 0.0));
  for (int j = 0; j <= p; ++j) {
    ders[0][static_cast<std::size_t>(j)] =
        ndu[static_cast<std::size_t>(j)][static_cast<std::size_t>(p)];
  }

  std::vector<std::vector<double>> a(2, std::vector<double>(static_cast<std::size_t>(p + 1), 0.0));
  for (int r = 0; r <= p; ++r) {
    int s1 = 0;
    int s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= d; ++k) {
      double dd = 0.0;
      const int rk = r - k;
      const int pk = p - k;
      if (r >= k) {
        a[static_cast<std::size_t>(s2)][0] =
            a[static_cast<std::size_t>(s1)][0] /
            ndu[static_cast<std::size_t>(pk + 1)][static_cast<std::size_t>(rk)];
        dd = a[static_cast<std::size_t>(s2)][0] *
             ndu[static_cast<std::size_t>(rk)][static_cast<std::size_t>(pk)];
      }
      const int j1 = (rk >= -1) ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? (k - 1) : (p - r);
      for (int j = j1; j <= j2; ++j) {
        a[static_cast<std::size_t>(s2)][static_cast<std::size_t>(j)] =
            (a[static_cast<std::size_t>(s1)][static_cast<std::size_t>(j)] -
             a[static_cast<std::size_t>(s1)][static_cast<std::size_t>(j - 1)]) /
            ndu[static_cast<std::size_t>(pk + 1)][static_cast<std::size_t>(rk + j)];
        dd += a[static_cast<std::size_t>(s2)][static_cast<std::size_t>(j)] *
              ndu[static_cast<std::size_t>(rk + j)][static_cast<std::size_t>(pk)];
      }
      if (r <= pk) {
        a[static_cast<std::size_t>(s2)][static_cast<std::size_t>(k)] =
            -a[static_cast<std::size_t>(s1)][static_cast<std::size_t>(k - 1)] /
            ndu[static_cast<std::size_t>(pk + 1)][static_cast<std::size_t>(r)];
        dd += a[static_cast<std::size_t>(s2)][static_cast<std::size_t>(k)] *
              ndu[static_cast<std::size_t>(r)][static_cast<std::size_t>(pk)];
      }
      ders[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)] = dd;
      std::swap(s1, s2);
    }
  }

  double factor = static_cast<double>(p);
  for (int k = 1; k <= d; ++k) {
    for (int j = 0; j <= p; ++j) {
      ders[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] *= factor;
    }
    factor *= static_cast<double>(p - k);
  }
  return ders;
}

BSplineCurve::BSplineCurve(std::vector<Vec3> control_points, int degree)
    : ctrl_(std::move(control_points)), degree_(degree) {
  if (degree < 1) throw DomainError("BSplineCurve: degree must be >= 1");
  if (static_cast<int>(ctrl_.size()) < degree + 1) {
    throw DomainError("BSplineCurve: need at least degree+1 control points");
  }
  knots_ = clamped_uniform_knots(degree_, static_cast<int>(ctrl_.size()), 0.0, 1.0);
}

Vec3 BSplineCurve::evaluate(double t) const {
  if (t < 0.0 || t > 1.0) throw DomainError("BSplineCurve::evaluate: t outside [0,1]");
  const int num_ctrl = static_cast<int>(ctrl_.size());
  const int span = find_span(knots_, degree_, num_ctrl, t);
  const auto basis = basis_derivatives(knots_, degree_, span, t, 0);
  Vec3 result = Vec3::Zero();
  for (int j = 0; j <= degree_; ++j) {
    result += basis[0][static_cast<std::size_t>(j)] *
              ctrl_[static_cast<std::size_t>(span - degree_ + j)];
  }
  return result;
}

}  // namespace shift
