#pragma once

#include "qnum/convexity.hpp"
#include "qnum/measures.hpp"
#include "qnum/network.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace qnum {

/// The measure of one route with its certificate and barrier threshold.
struct RouteModel {
  MeasureModel measure;
  ConvexityCertificate certificate;
  /// Lower bound on u_i: the zero threshold c, or the cutoff of a
  /// restricted-domain measure.
  double threshold = 0.0;
};

/// A network with one certified measure per route.
class Problem {
 public:
  /// Resolves each route's measure id. Throws ValidationError on unknown ids.
  Problem(NetworkModel network, const MeasureRegistry& registry);
  /// `route_measures[i]` is used for route i.
  Problem(NetworkModel network, std::vector<MeasureModel> route_measures);

  const NetworkModel& network() const noexcept { return network_; }
  std::span<const RouteModel> routes() const noexcept { return routes_; }
  const RouteModel& route(std::size_t i) const { return routes_.at(i); }
  std::size_t num_routes() const noexcept { return routes_.size(); }
  std::size_t num_links() const noexcept { return network_.num_links(); }

  /// Weakest route certificate.
  CertificateClass certificate() const noexcept { return certificate_; }
  bool certified() const noexcept {
    return certificate_ != CertificateClass::Uncertified;
  }

 private:
  void bind(std::vector<MeasureModel> route_measures);

  NetworkModel network_;
  std::vector<RouteModel> routes_;
  CertificateClass certificate_ = CertificateClass::Uncertified;
};

/// Log-rates y with the derived rates, link loads, Werner parameters.
struct EvalPoint {
  Eigen::VectorXd y;
  Eigen::VectorXd x;     ///< e^y
  Eigen::VectorXd load;  ///< <A_j, x> per link
  Eigen::VectorXd w;     ///< 1 - load / d per link
  Eigen::VectorXd u;     ///< prod_j w_j^{a_ji} per route
};

/// Total on finite y; w may leave (0, 1).
EvalPoint eval_point(const NetworkModel& network, const Eigen::VectorXd& y);

struct FeasibilityReport {
  bool feasible = false;
  Eigen::VectorXd slacks;   ///< d_j - <A_j, x>
  Eigen::VectorXd margins;  ///< u_i - threshold_i
  std::vector<std::size_t> binding_links;
  std::vector<std::size_t> binding_routes;
};

inline constexpr double kBindingRelTol = 1e-6;

/// feasible iff slack_j > margin d_j and u_i - threshold_i > margin for all
/// links and routes. Constraints within 1e-6 (relative) of active are listed
/// as binding.
FeasibilityReport feasibility(const Problem& problem, const Eigen::VectorXd& y,
                              double margin = 0.0);

struct RouteTerm {
  double u = 0.0;
  double f = 0.0;
  double log_f = 0.0;
};

/// Value, gradient and Hessian of -sum_i (y_i + F_i(u_i(y))).
struct ObjectiveEval {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  std::vector<RouteTerm> per_route;
};

enum class EvalOrder { Value = 0, Gradient = 1, Hessian = 2 };

/// Throws InfeasibleError naming the first violated constraint.
ObjectiveEval evaluate_objective(const Problem& problem,
                                 const Eigen::VectorXd& y,
                                 EvalOrder order = EvalOrder::Hessian);

double objective(const Problem& problem, const Eigen::VectorXd& y);
Eigen::VectorXd objective_gradient(const Problem& problem,
                                   const Eigen::VectorXd& y);
Eigen::MatrixXd objective_hessian(const Problem& problem,
                                  const Eigen::VectorXd& y);

/// dw_j/dy_k = -a_jk x_k / d_j, an l x r matrix.
Eigen::MatrixXd link_werner_jacobian(const NetworkModel& network,
                                     const EvalPoint& point);

/// du_i/dy_k = sum_{j in route i} v_jk with
/// v_jk = -(a_jk x_k / d_j) prod_{j' != j} w_j'. Requires w > 0 on the route.
Eigen::VectorXd route_u_gradient(const NetworkModel& network,
                                 const EvalPoint& point, std::size_t route);

/// Hessian of u_i(y) from the v_jk expansion. Requires w > 0 on the route.
Eigen::MatrixXd route_u_hessian(const NetworkModel& network,
                                const EvalPoint& point, std::size_t route);

struct RouteUJet {
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;  ///< empty unless requested
};

/// Gradients (and Hessians) of every u_i at one point.
std::vector<RouteUJet> route_u_jets(const NetworkModel& network,
                                    const EvalPoint& point, bool with_hessian);

/// Hessian of F_i(u_i(y)): F'' grad(u) grad(u)^T + F' H_u.
Eigen::MatrixXd route_log_measure_hessian(const Problem& problem,
                                          const EvalPoint& point,
                                          std::size_t route);

/// Product utility prod_i x_i f_i(prod_j w_j^{a_ji}) of the original
/// problem. Throws DomainError if x, w or a rate constraint is violated.
double canonical_objective(const Problem& problem, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& w);

/// w_j = 1 - <A_j, x> / d_j. Throws DomainError naming the first link
/// whose capacity is exceeded.
Eigen::VectorXd reduce_w(const NetworkModel& network, const Eigen::VectorXd& x);

}  // namespace qnum
