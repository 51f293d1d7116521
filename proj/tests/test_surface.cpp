#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shift/surface.hpp"

#include <cmath>
#include <functional>
#include <random>

using namespace shift;

namespace {

PointCloud grid_cloud(double x0, double x1, double y0, double y1, int nx, int ny,
                      const std::function<double(double, double)>& f) {
  PointCloud cloud;
  cloud.points.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  for (int iy = 0; iy < ny; ++iy) {
    const double y = y0 + (y1 - y0) * iy / (ny - 1);
    for (int ix = 0; ix < nx; ++ix) {
      const double x = x0 + (x1 - x0) * ix / (nx - 1);
      cloud.points.emplace_back(x, y, f(x, y));
    }
  }
  return cloud;
}

SurfaceFit fit_paraboloid() {
  const auto cloud = grid_cloud(-1, 1, -1, 1, 25, 25,
                                [](double x, double y) { return x * x + y * y; });
  SurfaceFitParams params;
  params.num_ctrl_u = 8;
  params.num_ctrl_v = 8;
  return fit_surface(cloud, params);
}

SurfaceFit flat_fit() {
  const auto cloud = grid_cloud(0, 4, 0, 4, 20, 20, [](double, double) { return 0.0; });
  return fit_surface(cloud, {3, 9, 9, 1e-6});
}

}  // namespace

TEST_CASE("planar cloud reproduces the plane") {
  const auto cloud = grid_cloud(0, 1, 0, 1, 10, 10, [](double, double) { return 0.0; });
  const SurfaceFit fit = fit_surface(cloud, {3, 6, 6, 1e-6});
  double max_abs_z = 0.0;
  for (double u = 0.0; u <= 1.0; u += 0.05) {
    for (double v = 0.0; v <= 1.0; v += 0.05) {
      max_abs_z = std::max(max_abs_z, std::abs(fit.surface.position(u, v).z()));
    }
  }
  CHECK(max_abs_z <= 1e-9);
}

TEST_CASE("paraboloid fit has tiny residual") {
  const SurfaceFit fit = fit_paraboloid();
  CHECK(fit.rms_residual <= 1e-6);
}

TEST_CASE("degenerate footprints are rejected") {
  PointCloud collinear;
  collinear.points = {{0, 0, 0}, {1, 1, 0}, {2, 2, 0}};
  CHECK_THROWS_AS(fit_surface(collinear, {}), FittingError);

  // Over-parameterization: more control coefficients than samples.
  const auto small = grid_cloud(0, 1, 0, 1, 5, 5, [](double, double) { return 0.0; });
  CHECK_THROWS_AS(fit_surface(small, {3, 12, 12, 1e-6}), FittingError);
}

TEST_CASE("flat surface has vanishing second partials") {
  const auto cloud = grid_cloud(0, 2, 0, 2, 8, 8, [](double, double) { return 1.5; });
  const SurfaceFit fit = fit_surface(cloud, {3, 5, 5, 1e-6});
  const SurfaceJet jet = fit.surface.evaluate(0.4, 0.7);
  CHECK(jet.suu.norm() < 1e-9);
  CHECK(jet.suv.norm() < 1e-9);
  CHECK(jet.svv.norm() < 1e-9);
}

TEST_CASE("analytic partials match central finite differences") {
  const SurfaceFit fit = fit_paraboloid();
  const ParametricSurface& s = fit.surface;
  const double h = 1e-4;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(2 * h, 1.0 - 2 * h);
  for (int trial = 0; trial < 50; ++trial) {
    const double u = dist(rng);
    const double v = dist(rng);
    const SurfaceJet jet = s.evaluate(u, v);
    const Vec3 fd_u = (s.position(u + h, v) - s.position(u - h, v)) / (2 * h);
    const Vec3 fd_v = (s.position(u, v + h) - s.position(u, v - h)) / (2 * h);
    CHECK((jet.su - fd_u).norm() <= 1e-5 * std::max(1.0, jet.su.norm()));
    CHECK((jet.sv - fd_v).norm() <= 1e-5 * std::max(1.0, jet.sv.norm()));
  }
}

TEST_CASE("evaluation outside the domain fails") {
  const SurfaceFit fit = fit_paraboloid();
  CHECK_THROWS_AS(fit.surface.evaluate(1.1, 0.5), DomainError);
  CHECK_THROWS_AS(fit.surface.evaluate(0.5, -0.01), DomainError);
}

TEST_CASE("fundamental forms of the unit plane") {
  const auto cloud = grid_cloud(0, 1, 0, 1, 8, 8, [](double, double) { return 0.0; });
  const SurfaceFit fit = fit_surface(cloud, {3, 5, 5, 1e-6});
  const FundamentalForms forms = fundamental_forms(fit.surface, 0.3, 0.6);
  CHECK(forms.E == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(forms.G == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(forms.F) < 1e-9);
  CHECK(std::abs(forms.L) < 1e-9);
  CHECK(std::abs(forms.M) < 1e-9);
  CHECK(std::abs(forms.N) < 1e-9);
  CHECK((forms.normal - Vec3(0, 0, 1)).norm() < 1e-9);
}

TEST_CASE("paraboloid forms match the analytic formulas") {
  const SurfaceFit fit = fit_paraboloid();
  for (const auto& [u, v] : std::vector<std::pair<double, double>>{
           {0.5, 0.5}, {0.3, 0.7}, {0.62, 0.41}}) {
    const SurfaceJet jet = fit.surface.evaluate(u, v);
    const double x = jet.position.x();
    const double y = jet.position.y();
    const FundamentalForms forms = fundamental_forms(jet);
    const double root = std::sqrt(1.0 + 4 * x * x + 4 * y * y);
    CHECK(forms.E == doctest::Approx(4 + 16 * x * x).epsilon(1e-4));
    CHECK(forms.F == doctest::Approx(16 * x * y).epsilon(1e-4).scale(1.0));
    CHECK(forms.G == doctest::Approx(4 + 16 * y * y).epsilon(1e-4));
    CHECK(forms.L == doctest::Approx(8.0 / root).epsilon(1e-4));
    CHECK(forms.M == doctest::Approx(0.0).scale(1.0).epsilon(1e-4));
    CHECK(forms.N == doctest::Approx(8.0 / root).epsilon(1e-4));
  }
}

TEST_CASE("singular jet is rejected") {
  SurfaceJet jet;
  jet.su = Vec3(1, 0, 0);
  jet.sv = Vec3(2, 0, 0);  // parallel
  CHECK_THROWS_AS(fundamental_forms(jet), SingularityError);
}

TEST_CASE("plane curvature is zero") {
  const auto cloud = grid_cloud(0, 1, 0, 1, 8, 8, [](double, double) { return 0.25; });
  const SurfaceFit fit = fit_surface(cloud, {3, 5, 5, 1e-6});
  const CurvatureSample s = curvature(fundamental_forms(fit.surface, 0.5, 0.5));
  CHECK(std::abs(s.gaussian) <= 1e-6);
  CHECK(std::abs(s.mean) <= 1e-6);
}

TEST_CASE("cylinder patch is developable: K ~ 0, |H| ~ 1/(2r)") {
  const double r = 2.0;
  const auto cloud = grid_cloud(0, 2, -0.5, 0.5, 30, 30, [r](double, double y) {
    return std::sqrt(r * r - y * y);
  });
  const SurfaceFit fit = fit_surface(cloud, {3, 8, 8, 1e-8});
  for (double u = 0.25; u <= 0.75; u += 0.25) {
    for (double v = 0.25; v <= 0.75; v += 0.25) {
      const CurvatureSample s = curvature(fundamental_forms(fit.surface, u, v));
      CHECK(std::abs(s.gaussian) < 1e-3);
      CHECK(std::abs(s.mean) == doctest::Approx(1.0 / (2 * r)).epsilon(0.05));
    }
  }
}

TEST_CASE("sphere cap curvature matches 1/r^2 and 1/r") {
  const double r = 2.0;
  const auto cloud = grid_cloud(-0.35 * r, 0.35 * r, -0.35 * r, 0.35 * r, 50, 50,
                                [r](double x, double y) {
                                  return std::sqrt(r * r - x * x - y * y);
                                });
  const SurfaceFit fit = fit_surface(cloud, {3, 10, 10, 1e-8});
  for (double u = 0.25; u <= 0.75; u += 0.125) {
    for (double v = 0.25; v <= 0.75; v += 0.125) {
      const CurvatureSample s = curvature(fundamental_forms(fit.surface, u, v));
      CHECK(s.gaussian == doctest::Approx(1.0 / (r * r)).epsilon(1e-2));
      CHECK(std::abs(s.mean) == doctest::Approx(1.0 / r).epsilon(1e-2));
    }
  }
}

TEST_CASE("paraboloid curvature at the origin") {
  const SurfaceFit fit = fit_paraboloid();
  // u = v = 0.5 maps to the world origin.
  const CurvatureSample s = curvature(fundamental_forms(fit.surface, 0.5, 0.5));
  CHECK(s.gaussian == doctest::Approx(4.0).epsilon(1e-3));
  CHECK(std::abs(s.mean) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("threshold statistics") {
  auto make = [](std::initializer_list<double> ks) {
    std::vector<CurvatureSample> out;
    for (const double k : ks) {
      CurvatureSample s;
      s.gaussian = k;
      s.mean = 0.0;
      out.push_back(s);
    }
    return out;
  };

  SUBCASE("identical samples give zero sigma") {
    const auto th = compute_thresholds(make({3.0, 3.0, 3.0}), 2.0, 2.0);
    CHECK(th.sigma_k == 0.0);
    CHECK(th.k_th == doctest::Approx(3.0));
  }
  SUBCASE("hand-computed mean and deviation") {
    const auto th = compute_thresholds(make({0.0, 0.0, 0.0, 10.0}), 1.0, 1.0);
    CHECK(th.mu_k == doctest::Approx(2.5));
    CHECK(th.sigma_k == doctest::Approx(std::sqrt(18.75)));
    CHECK(th.k_th == doctest::Approx(2.5 + std::sqrt(18.75)));
  }
  SUBCASE("empty input fails") {
    CHECK_THROWS_AS(compute_thresholds({}, 2.0, 2.0), DomainError);
  }
}

TEST_CASE("outlier classification equals the brute-force scan") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int field = 0; field < 120; ++field) {
    std::vector<CurvatureSample> samples;
    const int n = 8 + static_cast<int>(rng() % 40);
    for (int k = 0; k < n; ++k) {
      CurvatureSample s;
      s.gaussian = dist(rng);
      s.mean = dist(rng);
      s.i = k / 7;
      s.j = k % 7;
      samples.push_back(s);
    }
    const auto th = compute_thresholds(samples, 1.0, 1.0);
    const auto got = classify_outliers(samples, th);
    std::set<GridIndex> expected;
    for (const auto& s : samples) {
      if (std::abs(s.gaussian) > th.k_th || std::abs(s.mean) > th.h_th) {
        expected.insert({s.i, s.j});
      }
    }
    CHECK(got == expected);
  }
}

TEST_CASE("zero thresholds flag every nonzero-curvature sample") {
  std::vector<CurvatureSample> samples;
  for (int k = 0; k < 10; ++k) {
    CurvatureSample s;
    s.gaussian = (k % 3 == 0) ? 0.0 : 0.5;
    s.mean = 0.0;
    s.i = 0;
    s.j = k;
    samples.push_back(s);
  }
  CurvatureThresholds zero;
  const auto got = classify_outliers(samples, zero);
  for (const auto& s : samples) {
    const bool flagged = got.count({s.i, s.j}) > 0;
    CHECK(flagged == (std::abs(s.gaussian) > 0.0));
  }
}

TEST_CASE("smoothing without outliers is a no-op") {
  const SurfaceFit fit = flat_fit();
  const auto samples = curvature_field(fit.surface);
  const auto th = compute_thresholds(samples, 2.0, 2.0);
  const SmoothResult res = laplacian_smooth(fit.surface, {}, th, 0.5, 50);
  CHECK(res.iterations == 0);
  CHECK(res.converged);
  for (int i = 0; i < fit.surface.num_ctrl_u(); ++i) {
    for (int j = 0; j < fit.surface.num_ctrl_v(); ++j) {
      CHECK((res.surface.control_point(i, j) - fit.surface.control_point(i, j)).norm() ==
            0.0);
    }
  }
}

TEST_CASE("one smoothing step moves a spiked control point halfway to its neighbor mean") {
  SurfaceFit fit = flat_fit();
  ParametricSurface spiked = fit.surface;
  const int si = 4, sj = 4;
  const Vec3 original = spiked.control_point(si, sj);
  spiked.set_control_point(si, sj, original + Vec3(0, 0, 1.0));

  const Vec3 mean = 0.25 * (spiked.control_point(si - 1, sj) + spiked.control_point(si + 1, sj) +
                            spiked.control_point(si, sj - 1) + spiked.control_point(si, sj + 1));
  const Vec3 spike_pos = spiked.control_point(si, sj);
  const Vec3 expected = spike_pos + 0.5 * (mean - spike_pos);

  // Impossible thresholds force exactly max_iters iterations.
  CurvatureThresholds impossible;
  impossible.k_th = -1.0;
  impossible.h_th = -1.0;
  const SmoothResult one = laplacian_smooth(spiked, {{si, sj}}, impossible, 0.5, 1);
  CHECK(one.iterations == 1);
  CHECK((one.surface.control_point(si, sj) - expected).norm() < 1e-12);
}

TEST_CASE("zero smoothing strength never converges on a real outlier") {
  SurfaceFit fit = flat_fit();
  ParametricSurface spiked = fit.surface;
  spiked.set_control_point(4, 4, spiked.control_point(4, 4) + Vec3(0, 0, 1.0));
  const auto samples = curvature_field(spiked);
  const auto th = compute_thresholds(samples, 2.0, 2.0);
  const auto outliers = classify_outliers(samples, th);
  REQUIRE(!outliers.empty());

  const SmoothResult res = laplacian_smooth(spiked, outliers, th, 0.0, 10);
  CHECK(!res.converged);
  CHECK(res.iterations == 10);
  CHECK((res.surface.control_point(4, 4) - spiked.control_point(4, 4)).norm() == 0.0);
}

TEST_CASE("smoothing strictly reduces the spike curvature each iteration") {
  SurfaceFit fit = flat_fit();
  ParametricSurface spiked = fit.surface;
  spiked.set_control_point(4, 4, spiked.control_point(4, 4) + Vec3(0, 0, 0.8));
  const auto samples = curvature_field(spiked);
  const auto th = compute_thresholds(samples, 2.0, 2.0);
  const auto outliers = classify_outliers(samples, th);
  REQUIRE(!outliers.empty());

  auto max_flagged_k = [&](const ParametricSurface& s) {
    double worst = 0.0;
    for (const auto& [i, j] : outliers) {
      const double u = std::clamp(s.greville_u(i), 0.0, 1.0);
      const double v = std::clamp(s.greville_v(j), 0.0, 1.0);
      const CurvatureSample c = curvature(fundamental_forms(s, u, v));
      worst = std::max(worst, std::abs(c.gaussian));
    }
    return worst;
  };

  ParametricSurface current = spiked;
  double prev = max_flagged_k(current);
  for (int iter = 0; iter < 5; ++iter) {
    CurvatureThresholds impossible;
    impossible.k_th = -1.0;
    impossible.h_th = -1.0;
    const SmoothResult step = laplacian_smooth(current, outliers, impossible, 0.5, 1);
    const double now = max_flagged_k(step.surface);
    CHECK(now < prev);
    prev = now;
    current = step.surface;
  }
}

TEST_CASE("smoothing converges below thresholds on a spiked flat surface") {
  SurfaceFit fit = flat_fit();
  ParametricSurface spiked = fit.surface;
  spiked.set_control_point(4, 4, spiked.control_point(4, 4) + Vec3(0, 0, 0.8));
  const auto samples = curvature_field(spiked);
  const auto th = compute_thresholds(samples, 2.0, 2.0);
  const auto outliers = classify_outliers(samples, th);
  const SmoothResult res = laplacian_smooth(spiked, outliers, th, 0.5, 50);
  CHECK(res.converged);
  CHECK(res.iterations > 0);
}

TEST_CASE("removal heuristic refits without the spiked samples") {
  auto cloud = grid_cloud(0, 4, 0, 4, 20, 20, [](double, double) { return 0.0; });
  for (const std::size_t idx : {std::size_t{190}, std::size_t{191}, std::size_t{210}}) {
    cloud.points[idx].z() += 1.0;
  }
  const SurfaceFitParams params{3, 9, 9, 1e-6};
  const SurfaceFit fit = fit_surface(cloud, params);
  const auto samples = curvature_field(fit.surface);
  const auto th = compute_thresholds(samples, 1.5, 1.5);
  const auto outliers = classify_outliers(samples, th);
  REQUIRE(!outliers.empty());
  const SurfaceFit refit = remove_and_refit(cloud, fit.surface, outliers, params);
  double max_abs_z = 0.0;
  for (double u = 0.1; u <= 0.9; u += 0.1) {
    for (double v = 0.1; v <= 0.9; v += 0.1) {
      max_abs_z = std::max(max_abs_z, std::abs(refit.surface.position(u, v).z()));
    }
  }
  CHECK(max_abs_z < 0.05);
}

TEST_CASE("elevation map of a constant plane") {
  const auto cloud = grid_cloud(0, 2, 0, 2, 10, 10, [](double, double) { return 3.0; });
  const SurfaceFit fit = fit_surface(cloud, {3, 6, 6, 1e-6});
  const ElevationMap map = extract_elevation(fit.surface, 0.25);
  for (int i = 0; i < map.rows(); ++i) {
    for (int j = 0; j < map.cols(); ++j) {
      CHECK(map.at(i, j) == doctest::Approx(3.0).epsilon(1e-9));
    }
  }
  CHECK(map.query(1.3, 0.7) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("elevation node queries equal direct surface evaluation") {
  const SurfaceFit fit = fit_paraboloid();
  const ElevationMap map = extract_elevation(fit.surface, 0.2);
  for (int i = 0; i < map.rows(); i += 2) {
    for (int j = 0; j < map.cols(); j += 2) {
      const double x = map.node_x(j);
      const double y = map.node_y(i);
      const Vec2 uv = fit.surface.world_to_uv(x, y);
      const double direct =
          fit.surface.position(std::min(1.0, uv.x()), std::min(1.0, uv.y())).z();
      CHECK(map.query(x, y) == doctest::Approx(direct).epsilon(1e-9));
    }
  }
}

TEST_CASE("bilinear mid-cell error stays within the curvature bound") {
  const SurfaceFit fit = fit_paraboloid();
  const double res = 0.25;
  const ElevationMap map = extract_elevation(fit.surface, res);
  const double bound = res * res * 2.0;  // max |Hessian| of x^2 + y^2
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dist(-0.9, 0.9);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = dist(rng);
    const double y = dist(rng);
    const double analytic = x * x + y * y;
    CHECK(std::abs(map.query(x, y) - analytic) <= bound);
  }
}

TEST_CASE("bilinear values are continuous across cell boundaries") {
  const SurfaceFit fit = fit_paraboloid();
  const ElevationMap map = extract_elevation(fit.surface, 0.25);
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> dist(0.05, 0.95);
  for (int j = 1; j + 1 < map.cols(); ++j) {
    const double x = map.node_x(j);
    const int i = 1 + static_cast<int>(rng() % static_cast<unsigned>(map.rows() - 2));
    const double y = map.node_y(i) + dist(rng) * map.resolution();
    // The shared node column makes the edge interpolant identical from both
    // adjacent cells.
    const double fy = (y - map.origin().y()) / map.resolution();
    const int i0 = std::min(static_cast<int>(fy), map.rows() - 2);
    const double t = fy - i0;
    const double edge = (1 - t) * map.at(i0, j) + t * map.at(i0 + 1, j);
    CHECK(std::abs(map.query(x, y) - edge) < 1e-12);
  }
}

TEST_CASE("bicubic queries are exact at nodes") {
  const SurfaceFit fit = fit_paraboloid();
  const ElevationMap map = extract_elevation(fit.surface, 0.25, Interpolation::kBicubic);
  CHECK(map.query(map.node_x(3), map.node_y(4)) ==
        doctest::Approx(map.at(4, 3)).epsilon(1e-9));
  CHECK(map.query(0.125, -0.125) ==
        doctest::Approx(2 * 0.125 * 0.125).epsilon(1e-3).scale(1.0));
}

TEST_CASE("oversized resolution is rejected") {
  const SurfaceFit fit = fit_paraboloid();
  CHECK_THROWS_AS(extract_elevation(fit.surface, 5.0), DomainError);
}
