#pragma once

#include "qnum/convexity.hpp"
#include "qnum/reformulation.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace qnum {

struct SolverConfig {
  double tol = 1e-9;          ///< stop when (l + r) / t < tol
  double newton_tol = 1e-10;  ///< stop centering when lambda^2 / 2 <= this
  double barrier_t0 = 1.0;
  double barrier_mu = 10.0;
  double backtrack_alpha = 0.25;
  double backtrack_beta = 0.5;
  int max_outer = 60;
  int max_newton = 100;
  double feasibility_margin = 1e-12;
  int multistart_count = 8;
  std::uint64_t seed = 0;

  /// Throws ValidationError on out-of-range fields.
  void validate() const;
};

enum class SolveStatus { Converged, BoundarySupremum, MaxIterations };

std::string to_string(SolveStatus s);

struct SolveDiagnostics {
  int outer_stages = 0;
  int newton_iters = 0;
  double final_gradient_norm = 0.0;  ///< ||grad objective||_inf
  double kkt_residual = 0.0;
  double duality_gap_bound = 0.0;    ///< (l + r) / t at exit
  int starts = 1;
  std::vector<std::string> boundary_warnings;
};

struct SolveResult {
  Eigen::VectorXd y;
  Eigen::VectorXd x;
  Eigen::VectorXd w;
  Eigen::VectorXd u;
  Eigen::VectorXd fidelity;
  Eigen::VectorXd measure_value;
  Eigen::VectorXd route_utility;  ///< x_i f_i(u_i)
  double objective = 0.0;         ///< -sum ln(route utility)
  double network_utility = 0.0;   ///< product of route utilities
  CertificateClass certificate = CertificateClass::Uncertified;
  bool certified = false;
  SolveStatus status = SolveStatus::MaxIterations;
  SolveDiagnostics diagnostics;
};

/// A point with every link slack >= d_j / 2 and every route margin at least
/// half of (1 - threshold_i), found by uniform halving of small rates.
Eigen::VectorXd find_interior_point(const Problem& problem);

/// Log-barrier interior-point method with damped Newton centering, started
/// from find_interior_point.
SolveResult solve(const Problem& problem, const SolverConfig& config = {});

/// As solve, from a given strictly feasible start.
SolveResult solve_from(const Problem& problem, const Eigen::VectorXd& y0,
                       const SolverConfig& config = {});

/// Best of multistart_count solves from log-uniformly scaled interior
/// points; the first start is find_interior_point itself.
SolveResult multistart_solve(const Problem& problem,
                             const SolverConfig& config = {});

/// solve for certified problems, multistart_solve otherwise.
SolveResult solve_auto(const Problem& problem, const SolverConfig& config = {});

/// ||grad objective||_inf when no constraint is near active; otherwise the
/// residual of the Lagrangian gradient with non-negative least-squares
/// multipliers on the near-active constraints.
double kkt_residual(const Problem& problem, const Eigen::VectorXd& y);

}  // namespace qnum
