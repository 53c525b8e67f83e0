#pragma once

#include "qnum/reformulation.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace qnum {

struct OracleConfig {
  int grid_points_per_dim = 400;
  /// 0 uses the hardware concurrency.
  unsigned threads = 0;
};

struct OracleResult {
  Eigen::VectorXd x;
  double utility = 0.0;      ///< prod_i x_i f_i(u_i) at x
  double log_utility = 0.0;
  double log_step = 0.0;     ///< spacing of the grid in ln x
  Eigen::VectorXd upper_bounds;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

/// Exhaustive search of the rate-only product utility over a log-uniform
/// grid b_i e^{-k L / n}, k = 1..n, L = ln 1e6, b_i = min d_j over the route's links.
/// Points with a saturated link or u_i <= threshold_i are skipped. Ties go to
/// the lowest flat grid index. Throws UnsupportedSizeError for r > 3.
OracleResult grid_search(const Problem& problem, const OracleConfig& config = {});

}  // namespace qnum
