#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shift/bspline.hpp"

#include <cmath>
#include <random>

using namespace shift;

TEST_CASE("clamped knot vector repeats end knots degree+1 times") {
  const auto knots = clamped_uniform_knots(3, 6, 0.0, 1.0);
  REQUIRE(knots.size() == 10);
  for (int i = 0; i <= 3; ++i) {
    CHECK(knots[static_cast<std::size_t>(i)] == 0.0);
    CHECK(knots[static_cast<std::size_t>(6 + i)] == 1.0);
  }
  CHECK(knots[4] == doctest::Approx(1.0 / 3.0));
  CHECK(knots[5] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("basis functions form a partition of unity") {
  const int degree = 3;
  const int n_ctrl = 8;
  const auto knots = clamped_uniform_knots(degree, n_ctrl, 0.0, 1.0);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double t = dist(rng);
    const int span = find_span(knots, degree, n_ctrl, t);
    const auto b = basis_derivatives(knots, degree, span, t, 2);
    double sum = 0.0, dsum = 0.0;
    for (int j = 0; j <= degree; ++j) {
      sum += b[0][static_cast<std::size_t>(j)];
      dsum += b[1][static_cast<std::size_t>(j)];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(dsum) < 1e-9);
  }
}

TEST_CASE("basis derivatives match central finite differences") {
  const int degree = 3;
  const int n_ctrl = 9;
  const auto knots = clamped_uniform_knots(degree, n_ctrl, 0.0, 1.0);
  auto eval_basis = [&](int index, double t) {
    const int span = find_span(knots, degree, n_ctrl, t);
    const auto b = basis_derivatives(knots, degree, span, t, 0);
    const int offset = index - (span - degree);
    if (offset < 0 || offset > degree) return 0.0;
    return b[0][static_cast<std::size_t>(offset)];
  };
  const double h = 1e-6;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(0.05, 0.95);
  for (int trial = 0; trial < 100; ++trial) {
    const double t = dist(rng);
    const int span = find_span(knots, degree, n_ctrl, t);
    const auto b = basis_derivatives(knots, degree, span, t, 2);
    for (int j = 0; j <= degree; ++j) {
      const int index = span - degree + j;
      const double fd1 = (eval_basis(index, t + h) - eval_basis(index, t - h)) / (2 * h);
      const double fd2 = (eval_basis(index, t + h) - 2 * eval_basis(index, t) +
                          eval_basis(index, t - h)) / (h * h);
      CHECK(b[1][static_cast<std::size_t>(j)] == doctest::Approx(fd1).epsilon(1e-5));
      CHECK(b[2][static_cast<std::size_t>(j)] ==
            doctest::Approx(fd2).epsilon(1e-3).scale(std::max(1.0, std::abs(fd2))));
    }
  }
}

TEST_CASE("clamped curve interpolates its end control points") {
  std::vector<Vec3> ctrl = {{0, 0, 0}, {1, 2, 0}, {3, -1, 1}, {4, 0, 2}, {5, 5, 5}};
  const BSplineCurve curve(ctrl, 3);
  CHECK((curve.evaluate(0.0) - ctrl.front()).norm() < 1e-14);
  CHECK((curve.evaluate(1.0) - ctrl.back()).norm() < 1e-14);
}

TEST_CASE("curve of collinear control points stays on the line") {
  std::vector<Vec3> ctrl;
  for (int i = 0; i < 6; ++i) ctrl.push_back(Vec3(i, 2.0 * i, -i));
  const BSplineCurve curve(ctrl, 3);
  for (double t = 0.0; t <= 1.0; t += 0.05) {
    const Vec3 p = curve.evaluate(t);
    CHECK(p.y() == doctest::Approx(2.0 * p.x()).epsilon(1e-12));
    CHECK(p.z() == doctest::Approx(-p.x()).epsilon(1e-12));
  }
}

TEST_CASE("curve rejects bad degree and domain") {
  std::vector<Vec3> ctrl = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  CHECK_THROWS_AS(BSplineCurve(ctrl, 3), DomainError);
  const BSplineCurve curve(ctrl, 2);
  CHECK_THROWS_AS(curve.evaluate(1.5), DomainError);
}
