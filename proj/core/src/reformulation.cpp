#include "qnum/reformulation.hpp"

#include "qnum/errors.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace qnum {

namespace {

using Eigen::Index;

Index idx(std::size_t k) { return static_cast<Index>(k); }

void check_dimension(const Problem& problem, const Eigen::VectorXd& y) {
  if (static_cast<std::size_t>(y.size()) != problem.num_routes()) {
    std::ostringstream msg;
    msg << "expected " << problem.num_routes() << " log-rates, got " << y.size();
    throw DomainError(msg.str());
  }
}

// Strict feasibility, naming the first violated constraint.
void require_feasible(const Problem& problem, const EvalPoint& p) {
  const auto& net = problem.network();
  for (std::size_t j = 0; j < net.num_links(); ++j) {
    if (!(p.w(idx(j)) > 0.0)) {
      std::ostringstream msg;
      msg << "infeasible: link \"" << net.links()[j].id << "\" load "
          << p.load(idx(j)) << " reaches capacity constant "
          << net.rate_constants()(idx(j));
      throw InfeasibleError(msg.str());
    }
  }
  for (std::size_t i = 0; i < problem.num_routes(); ++i) {
    const double thr = problem.route(i).threshold;
    if (!(p.u(idx(i)) > thr)) {
      std::ostringstream msg;
      msg << "infeasible: route \"" << net.routes()[i].id << "\" has u = "
          << p.u(idx(i)) << " <= threshold " << thr;
      throw InfeasibleError(msg.str());
    }
  }
}

// grad u_i and, optionally, its Hessian via the v_jk expansion.
void route_u_derivatives(const NetworkModel& net, const EvalPoint& p,
                         const Eigen::MatrixXd& jw, std::size_t route,
                         Eigen::VectorXd& grad, Eigen::MatrixXd* hess) {
  const auto r = idx(net.num_routes());
  const auto links = net.route_links(route);
  const double u = p.u(idx(route));

  // d ln u_i / dy_m = sum_{j in route} (dw_j/dy_m) / w_j.
  Eigen::VectorXd dlogu = Eigen::VectorXd::Zero(r);
  for (auto j : links) dlogu += jw.row(idx(j)).transpose() / p.w(idx(j));

  grad = Eigen::VectorXd::Zero(r);
  // v.row(n) holds v_jk for the n-th link j of the route; prod_{j' != j} w_j'
  // is u_i / w_j on the feasible set.
  Eigen::MatrixXd v(idx(links.size()), r);
  for (std::size_t n = 0; n < links.size(); ++n) {
    const auto j = links[n];
    v.row(idx(n)) = jw.row(idx(j)) * (u / p.w(idx(j)));
    grad += v.row(idx(n)).transpose();
  }
  if (!hess) return;

  // H_km = sum_j v_jk (delta_km + sum_{j'' != j} (dw_j''/dy_m) / w_j'').
  hess->setZero(r, r);
  for (std::size_t n = 0; n < links.size(); ++n) {
    const auto j = links[n];
    const Eigen::VectorXd others =
        dlogu - jw.row(idx(j)).transpose() / p.w(idx(j));
    *hess += v.row(idx(n)).transpose() * others.transpose();
  }
  hess->diagonal() += grad;
  // Exact in exact arithmetic; symmetrise away rounding.
  *hess = 0.5 * (*hess + hess->transpose()).eval();
}

}  // namespace

Problem::Problem(NetworkModel network, const MeasureRegistry& registry)
    : network_(std::move(network)) {
  std::vector<MeasureModel> measures;
  std::vector<std::string> unknown;
  for (const auto& route : network_.routes()) {
    if (const auto* m = registry.find(route.measure_id)) {
      measures.push_back(*m);
    } else {
      unknown.push_back(route.id + ":" + route.measure_id);
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown measure ids:";
    for (const auto& u : unknown) msg += " " + u;
    throw ValidationError(msg);
  }
  bind(std::move(measures));
}

Problem::Problem(NetworkModel network, std::vector<MeasureModel> route_measures)
    : network_(std::move(network)) {
  if (route_measures.size() != network_.num_routes()) {
    throw ValidationError("need exactly one measure per route");
  }
  bind(std::move(route_measures));
}

void Problem::bind(std::vector<MeasureModel> route_measures) {
  std::map<std::string, ConvexityCertificate> certs;
  routes_.clear();
  certificate_ = CertificateClass::Cond12;
  for (auto& m : route_measures) {
    auto it = certs.find(m.id());
    if (it == certs.end()) it = certs.emplace(m.id(), certify(m)).first;
    RouteModel rm{std::move(m), it->second, 0.0};
    rm.threshold = rm.certificate.restricted_cutoff.value_or(rm.measure.threshold());
    certificate_ = weakest(certificate_, rm.certificate.cls);
    routes_.push_back(std::move(rm));
  }
}

EvalPoint eval_point(const NetworkModel& network, const Eigen::VectorXd& y) {
  EvalPoint p;
  p.y = y;
  p.x = y.array().exp().matrix();
  p.load = network.incidence() * p.x;
  p.w = (1.0 - p.load.array() / network.rate_constants().array()).matrix();
  p.u.resize(idx(network.num_routes()));
  for (std::size_t i = 0; i < network.num_routes(); ++i) {
    double log_u = 0.0;
    bool positive = true;
    for (auto j : network.route_links(i)) {
      if (!(p.w(idx(j)) > 0.0)) {
        positive = false;
        break;
      }
      log_u += std::log(p.w(idx(j)));
    }
    if (positive) {
      p.u(idx(i)) = std::exp(log_u);
    } else {
      double prod = 1.0;
      for (auto j : network.route_links(i)) prod *= p.w(idx(j));
      p.u(idx(i)) = prod;
    }
  }
  return p;
}

FeasibilityReport feasibility(const Problem& problem, const Eigen::VectorXd& y,
                              double margin) {
  check_dimension(problem, y);
  const auto& net = problem.network();
  const auto p = eval_point(net, y);
  FeasibilityReport rep;
  rep.slacks = net.rate_constants() - p.load;
  rep.margins.resize(idx(problem.num_routes()));
  rep.feasible = y.allFinite();
  for (std::size_t j = 0; j < net.num_links(); ++j) {
    const double d = net.rate_constants()(idx(j));
    const double s = rep.slacks(idx(j));
    if (!(s > margin * d)) rep.feasible = false;
    if (s < kBindingRelTol * d) rep.binding_links.push_back(j);
  }
  for (std::size_t i = 0; i < problem.num_routes(); ++i) {
    const double mgn = p.u(idx(i)) - problem.route(i).threshold;
    rep.margins(idx(i)) = mgn;
    if (!(mgn > margin)) rep.feasible = false;
    if (mgn < kBindingRelTol) rep.binding_routes.push_back(i);
  }
  return rep;
}

Eigen::MatrixXd link_werner_jacobian(const NetworkModel& network,
                                     const EvalPoint& point) {
  Eigen::MatrixXd jw = network.incidence();
  for (Index j = 0; j < jw.rows(); ++j) {
    jw.row(j) = -(jw.row(j).array() * point.x.transpose().array()) /
                network.rate_constants()(j);
  }
  return jw;
}

Eigen::VectorXd route_u_gradient(const NetworkModel& network,
                                 const EvalPoint& point, std::size_t route) {
  Eigen::VectorXd grad;
  route_u_derivatives(network, point, link_werner_jacobian(network, point),
                      route, grad, nullptr);
  return grad;
}

Eigen::MatrixXd route_u_hessian(const NetworkModel& network,
                                const EvalPoint& point, std::size_t route) {
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  route_u_derivatives(network, point, link_werner_jacobian(network, point),
                      route, grad, &hess);
  return hess;
}

std::vector<RouteUJet> route_u_jets(const NetworkModel& network,
                                    const EvalPoint& point, bool with_hessian) {
  const auto jw = link_werner_jacobian(network, point);
  std::vector<RouteUJet> jets(network.num_routes());
  for (std::size_t i = 0; i < jets.size(); ++i) {
    route_u_derivatives(network, point, jw, i, jets[i].gradient,
                        with_hessian ? &jets[i].hessian : nullptr);
  }
  return jets;
}

Eigen::MatrixXd route_log_measure_hessian(const Problem& problem,
                                          const EvalPoint& point,
                                          std::size_t route) {
  const auto& net = problem.network();
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  route_u_derivatives(net, point, link_werner_jacobian(net, point), route, grad,
                      &hess);
  const auto jet = problem.route(route).measure.jet(point.u(idx(route)));
  return jet.d2_log_f * grad * grad.transpose() + jet.d_log_f * hess;
}

ObjectiveEval evaluate_objective(const Problem& problem,
                                 const Eigen::VectorXd& y, EvalOrder order) {
  check_dimension(problem, y);
  const auto& net = problem.network();
  const auto p = eval_point(net, y);
  require_feasible(problem, p);

  const auto r = idx(problem.num_routes());
  ObjectiveEval out;
  out.value = -y.sum();
  out.per_route.reserve(problem.num_routes());

  const bool want_grad = order >= EvalOrder::Gradient;
  const bool want_hess = order >= EvalOrder::Hessian;
  Eigen::MatrixXd jw;
  if (want_grad) {
    jw = link_werner_jacobian(net, p);
    out.gradient = Eigen::VectorXd::Constant(r, -1.0);
  }
  if (want_hess) out.hessian = Eigen::MatrixXd::Zero(r, r);

  Eigen::VectorXd grad_u;
  Eigen::MatrixXd hess_u;
  for (std::size_t i = 0; i < problem.num_routes(); ++i) {
    const double u = p.u(idx(i));
    const auto jet = problem.route(i).measure.jet(u);
    out.value -= jet.log_f;
    out.per_route.push_back({u, jet.f, jet.log_f});
    if (!want_grad) continue;
    route_u_derivatives(net, p, jw, i, grad_u, want_hess ? &hess_u : nullptr);
    out.gradient -= jet.d_log_f * grad_u;
    if (want_hess) {
      out.hessian -= jet.d2_log_f * grad_u * grad_u.transpose() +
                     jet.d_log_f * hess_u;
    }
  }
  return out;
}

double objective(const Problem& problem, const Eigen::VectorXd& y) {
  return evaluate_objective(problem, y, EvalOrder::Value).value;
}

Eigen::VectorXd objective_gradient(const Problem& problem,
                                   const Eigen::VectorXd& y) {
  return evaluate_objective(problem, y, EvalOrder::Gradient).gradient;
}

Eigen::MatrixXd objective_hessian(const Problem& problem,
                                  const Eigen::VectorXd& y) {
  return evaluate_objective(problem, y, EvalOrder::Hessian).hessian;
}

Eigen::VectorXd reduce_w(const NetworkModel& network, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != network.num_routes()) {
    throw DomainError("rate vector has wrong length");
  }
  if (!(x.array() > 0.0).all()) throw DomainError("rates must be positive");
  const Eigen::VectorXd load = network.incidence() * x;
  for (std::size_t j = 0; j < network.num_links(); ++j) {
    if (!(load(idx(j)) < network.rate_constants()(idx(j)))) {
      std::ostringstream msg;
      msg << "link \"" << network.links()[j].id << "\" capacity exceeded: load "
          << load(idx(j)) << " >= d = " << network.rate_constants()(idx(j));
      throw DomainError(msg.str());
    }
  }
  return (1.0 - load.array() / network.rate_constants().array()).matrix();
}

double canonical_objective(const Problem& problem, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& w) {
  const auto& net = problem.network();
  if (static_cast<std::size_t>(x.size()) != net.num_routes() ||
      static_cast<std::size_t>(w.size()) != net.num_links()) {
    throw DomainError("allocation has wrong dimensions");
  }
  if (!(x.array() > 0.0).all()) throw DomainError("rates must be positive");
  if (!(w.array() > 0.0).all() || !(w.array() <= 1.0).all()) {
    throw DomainError("link Werner parameters must lie in (0, 1]");
  }
  const Eigen::VectorXd load = net.incidence() * x;
  for (std::size_t j = 0; j < net.num_links(); ++j) {
    const double cap = link_capacity(net.rate_constants()(idx(j)), w(idx(j)));
    // Allow rounding slack from w produced by reduce_w.
    if (load(idx(j)) > cap * (1.0 + 1e-12) + 1e-300) {
      std::ostringstream msg;
      msg << "rate constraint violated on link \"" << net.links()[j].id << "\"";
      throw DomainError(msg.str());
    }
  }
  double utility = 1.0;
  for (std::size_t i = 0; i < net.num_routes(); ++i) {
    double u = 1.0;
    for (auto j : net.route_links(i)) u *= w(idx(j));
    utility *= x(idx(i)) * problem.route(i).measure.value(u);
  }
  return utility;
}

}  // namespace qnum
