#pragma once

#include <Eigen/Core>

#include <deque>
#include <functional>

namespace shift {

/// Limited-memory quasi-Newton minimizer with Armijo backtracking.
/// Kept in-repo so window refinement is deterministic and testable.
namespace lbfgs {

struct Options {
  int max_iterations = 200;
  int history = 8;               // stored (s, y) pairs
  double gradient_tolerance = 1e-6;
  double cost_tolerance = 1e-10; // stop when the decrease falls below this
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  double min_step = 1e-20;
};

struct Result {
  Eigen::VectorXd x;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  bool line_search_failed = false;
};

/// objective(x, grad) fills grad and returns the cost.
using Objective = std::function<double(const Eigen::VectorXd&,Eigen::VectorXd&)>;

inline Result minimize(const Objective& objective, Eigen::VectorXd x0,
                       const Options& opts = {}) {
  Result res;
  res.x = std::move(x0);
  const auto n = res.x.size();

  Eigen::VectorXd grad(n);
  res.cost = objective(res.x, grad);
  if (opts.max_iterations <= 0 || n == 0) return res;

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    if (grad.norm() <= opts.gradient_tolerance) {
      res.converged = true;
      break;
    }

    // Two-loop recursion for the search direction.
    Eigen::VectorXd direction = -grad;
    const std::size_t m = s_hist.size();
    std::vector<double> alpha(m);
    for (std::size_t k = m; k-- > 0;) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(direction);
      direction -= alpha[k] * y_hist[k];
    }
    if (m > 0) {
      const double gamma = s_hist.back().dot(y_hist.back()) /
                           y_hist.back().squaredNorm();
      direction *= gamma;
    }
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(direction);
      direction += (alpha[k] - beta) * s_hist[k];
    }

    double descent = grad.dot(direction);
    if (descent >= 0.0) {
      // Not a descent direction; fall back to steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      direction = -grad;
      descent = grad.dot(direction);
    }

    double step = m > 0 ? 1.0 : 1.0 / std::max(1.0, grad.norm());
    Eigen::VectorXd x_new(n);
    Eigen::VectorXd grad_new(n);
    double cost_new = 0.0;
    bool accepted = false;
    while (step >= opts.min_step) {
      x_new = res.x + step * direction;
      cost_new = objective(x_new, grad_new);
      if (cost_new <= res.cost + opts.armijo_c * step * descent) {
        accepted = true;
        break;
      }
      step *= opts.backtrack_factor;
    }
    if (!accepted) {
      res.line_search_failed = true;
      break;
    }

    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opts.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }

    const double decrease = res.cost - cost_new;
    res.x = std::move(x_new);
    res.cost = cost_new;
    grad = std::move(grad_new);
    ++res.iterations;

    if (decrease <= opts.cost_tolerance) {
      res.converged = true;
      break;
    }
  }
  if (!res.converged && !res.line_search_failed &&
      grad.norm() <= opts.gradient_tolerance) {
    res.converged = true;
  }
  return res;
}

}  // namespace lbfgs
}  // namespace shift
