#pragma once

#include "qnum/qnum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

namespace qnum::testing {

inline std::filesystem::path scenario_path(const std::string& name) {
  return std::filesystem::path(QNUM_SCENARIO_DIR) / name;
}

inline Problem load_problem(const std::string& name) {
  return scenario_problem(load_scenario(scenario_path(name)));
}

/// |a - b| relative to max(|a|, |b|, 1).
inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

inline double max_rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      worst = std::max(worst, rel_err(a(i, j), b(i, j)));
    }
  }
  return worst;
}

/// Strictly feasible y drawn along a random ray of rates, at a log-uniform
/// fraction (between e^-3 and e^-0.006) of the distance to the boundary.
inline Eigen::VectorXd random_feasible_y(const Problem& problem, std::mt19937_64& rng) {
  const auto r = static_cast<Eigen::Index>(problem.num_routes());
  std::normal_distribution<double> spread(0.0, 1.0);
  const Eigen::VectorXd x0 = find_interior_point(problem).array().exp().matrix();
  Eigen::VectorXd z(r);
  for (Eigen::Index i = 0; i < r; ++i) z(i) = x0(i) * std::exp(spread(rng));

  auto feasible = [&](double log_scale) {
    const Eigen::VectorXd y = (z.array().log() + log_scale).matrix();
    return feasibility(problem, y).feasible;
  };
  double lo = -40.0;
  double hi = std::log(problem.network().rate_constants().maxCoeff() / z.minCoeff()) + 1.0;
  for (int k = 0; k < 80; ++k) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  std::uniform_real_distribution<double> depth(0.002, 1.0);
  return (z.array().log() + lo - 3.0 * depth(rng)).matrix();
}

/// Five-point central difference of a scalar function.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& y) {
  Eigen::VectorXd g(y.size());
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    const double h = 1e-6 * (1.0 + std::abs(y(k)));
    auto at = [&](double s) {
      Eigen::VectorXd p = y;
      p(k) += s * h;
      return f(p);
    };
    g(k) = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
  }
  return g;
}

/// Five-point central difference of a vector function; column k is d/dy_k.
inline Eigen::MatrixXd fd_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& g, const Eigen::VectorXd& y) {
  const Eigen::VectorXd g0 = g(y);
  Eigen::MatrixXd jac(g0.size(), y.size());
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    const double h = 1e-6 * (1.0 + std::abs(y(k)));
    auto at = [&](double s) {
      Eigen::VectorXd p = y;
      p(k) += s * h;
      return g(p);
    };
    jac.col(k) = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
  }
  return jac;
}

/// Five-point second difference of a scalar function of one variable.
inline double fd_second(const std::function<double(double)>& f, double t, double h) {
  return (-f(t + 2 * h) + 16 * f(t + h) - 30 * f(t) + 16 * f(t - h) - f(t - 2 * h)) /
         (12 * h * h);
}

}  // namespace qnum::testing
