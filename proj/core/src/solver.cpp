#include "qnum/solver.hpp"

#include "qnum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <sstream>

namespace qnum {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Index idx(std::size_t k) { return static_cast<Index>(k); }

constexpr double kStationarityTol = 1e-6;
constexpr double kCutoffWarning = 1e-3;
constexpr double kMinStep = 1e-14;
constexpr int kMaxHalvings = 100;

std::vector<double> to_std(const VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

// t * objective - sum ln(link slack) - sum ln(u_i - threshold_i).
struct BarrierEval {
  double value = 0.0;
  VectorXd gradient;
  MatrixXd hessian;
};

BarrierEval barrier_eval(const Problem& problem, const VectorXd& y, double t,
                         bool with_derivatives) {
  const auto& net = problem.network();
  const auto order = with_derivatives ? EvalOrder::Hessian : EvalOrder::Value;
  const auto obj = evaluate_objective(problem, y, order);
  const auto p = eval_point(net, y);

  BarrierEval out;
  out.value = t * obj.value;
  const VectorXd slack = net.rate_constants() - p.load;
  for (std::size_t j = 0; j < net.num_links(); ++j) {
    out.value -= std::log(slack(idx(j)));
  }
  VectorXd margin(idx(problem.num_routes()));
  for (std::size_t i = 0; i < problem.num_routes(); ++i) {
    margin(idx(i)) = p.u(idx(i)) - problem.route(i).threshold;
    out.value -= std::log(margin(idx(i)));
  }
  if (!with_derivatives) return out;

  out.gradient = t * obj.gradient;
  out.hessian = t * obj.hessian;

  // Link terms: with g_jk = a_jk x_k, grad = g_j / s_j and
  // hess = diag(g_j) / s_j + g_j g_j^T / s_j^2.
  const MatrixXd g =
      net.incidence().array().rowwise() * p.x.transpose().array();
  for (std::size_t j = 0; j < net.num_links(); ++j) {
    const double s = slack(idx(j));
    const VectorXd gj = g.row(idx(j)).transpose();
    out.gradient += gj / s;
    out.hessian.diagonal() += gj / s;
    out.hessian += gj * gj.transpose() / (s * s);
  }

  const auto jets = route_u_jets(net, p, true);
  for (std::size_t i = 0; i < problem.num_routes(); ++i) {
    const double m = margin(idx(i));
    const auto& ju = jets[i];
    out.gradient -= ju.gradient / m;
    out.hessian += ju.gradient * ju.gradient.transpose() / (m * m) -
                   ju.hessian / m;
  }
  return out;
}

// Newton direction from H d = -g, shifting H until it factors.
VectorXd newton_direction(const MatrixXd& h, const VectorXd& g) {
  Eigen::LLT<MatrixXd> llt(h);
  if (llt.info() == Eigen::Success) return llt.solve(-g);
  const double scale = std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
  double shift = 1e-10 * scale;
  const auto n = h.rows();
  for (int k = 0; k < 40; ++k, shift *= 10.0) {
    llt.compute(h + shift * MatrixXd::Identity(n, n));
    if (llt.info() == Eigen::Success) return llt.solve(-g);
  }
  throw NumericalError("Newton system could not be factorised", to_std(g));
}

bool strictly_feasible(const Problem& problem, const VectorXd& y,
                       double margin) {
  return y.allFinite() && feasibility(problem, y, margin).feasible;
}

SolveResult assemble(const Problem& problem, const VectorXd& y) {
  const auto& net = problem.network();
  SolveResult res;
  res.y = y;
  const auto p = eval_point(net, y);
  res.x = p.x;
  res.w = reduce_w(net, p.x);
  res.u = p.u;
  const auto r = idx(problem.num_routes());
  res.fidelity.resize(r);
  res.measure_value.resize(r);
  res.route_utility.resize(r);
  res.network_utility = 1.0;
  for (Index i = 0; i < r; ++i) {
    const double u = std::clamp(p.u(i), 0.0, 1.0);
    res.fidelity(i) = fidelity_from_werner(u);
    res.measure_value(i) = problem.route(static_cast<std::size_t>(i)).measure.value(u);
    res.route_utility(i) = p.x(i) * res.measure_value(i);
    res.network_utility *= res.route_utility(i);
  }
  res.objective = objective(problem, y);
  res.certificate = problem.certificate();
  res.certified = problem.certified();
  return res;
}

}  // namespace

void SolverConfig::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(tol) || !positive(newton_tol) || !positive(barrier_t0) ||
      !(barrier_mu > 1.0) || max_outer <= 0 || max_newton <= 0 ||
      !(feasibility_margin >= 0.0) || multistart_count < 1) {
    throw ValidationError("solver configuration fields must be positive (mu > 1)");
  }
  if (!(backtrack_alpha > 0.0 && backtrack_alpha < 0.5)) {
    throw ValidationError("backtrack_alpha must lie in (0, 0.5)");
  }
  if (!(backtrack_beta > 0.0 && backtrack_beta < 1.0)) {
    throw ValidationError("backtrack_beta must lie in (0, 1)");
  }
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged:
      return "Converged";
    case SolveStatus::BoundarySupremum:
      return "BoundarySupremum";
    case SolveStatus::MaxIterations:
      return "MaxIterations";
  }
  return "MaxIterations";
}

VectorXd find_interior_point(const Problem& problem) {
  const auto& net = problem.network();
  const auto r = problem.num_routes();
  VectorXd x(idx(r));
  for (std::size_t i = 0; i < r; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (auto j : net.route_links(i)) {
      best = std::min(best, net.rate_constants()(idx(j)) / (2.0 * static_cast<double>(r)));
    }
    x(idx(i)) = best;
  }
  for (int halving = 0; halving <= kMaxHalvings; ++halving) {
    const VectorXd y = x.array().log().matrix();
    const auto rep = feasibility(problem, y);
    bool ok = true;
    for (std::size_t j = 0; j < net.num_links() && ok; ++j) {
      ok = rep.slacks(idx(j)) >= 0.5 * net.rate_constants()(idx(j));
    }
    for (std::size_t i = 0; i < r && ok; ++i) {
      ok = rep.margins(idx(i)) >= 0.5 * (1.0 - problem.route(i).threshold);
    }
    if (ok) return y;
    x *= 0.5;
  }
  throw InfeasibleError("no interior point found after 100 halvings of the rates");
}

SolveResult solve_from(const Problem& problem, const VectorXd& y0,
                       const SolverConfig& config) {
  config.validate();
  if (!strictly_feasible(problem, y0, config.feasibility_margin)) {
    throw InfeasibleError("solver start point is not strictly feasible");
  }
  const double m = static_cast<double>(problem.num_links() + problem.num_routes());
  VectorXd y = y0;
  double t = config.barrier_t0;
  SolveDiagnostics diag;
  bool reached_gap = false;

  for (int outer = 1; outer <= config.max_outer; ++outer) {
    diag.outer_stages = outer;
    for (int it = 0; it < config.max_newton; ++it) {
      const auto cur = barrier_eval(problem, y, t, true);
      if (!std::isfinite(cur.value) || !cur.gradient.allFinite() ||
          !cur.hessian.allFinite()) {
        throw NumericalError("non-finite barrier value or derivatives",
                             to_std(y));
      }
      const VectorXd step = newton_direction(cur.hessian, cur.gradient);
      const double slope = cur.gradient.dot(step);
      if (-slope / 2.0 <= config.newton_tol) break;

      double s = 1.0;
      while (s >= kMinStep &&
             !strictly_feasible(problem, y + s * step, config.feasibility_margin)) {
        s *= 0.5;
      }
      bool accepted = false;
      while (s >= kMinStep) {
        const VectorXd trial = y + s * step;
        const double v = barrier_eval(problem, trial, t, false).value;
        if (v <= cur.value + config.backtrack_alpha * s * slope) {
          y = trial;
          accepted = true;
          break;
        }
        s *= config.backtrack_beta;
      }
      // No representable decrease left: the stage is centred to rounding.
      if (!accepted) break;
      ++diag.newton_iters;
    }
    diag.duality_gap_bound = m / t;
    if (m / t < config.tol) {
      reached_gap = true;
      break;
    }
    t *= config.barrier_mu;
  }

  auto res = assemble(problem, y);
  const auto rep = feasibility(problem, y);
  const VectorXd grad = objective_gradient(problem, y);
  diag.final_gradient_norm = grad.cwiseAbs().maxCoeff();
  diag.kkt_residual = kkt_residual(problem, y);

  const auto& net = problem.network();
  for (std::size_t i = 0; i < problem.num_routes(); ++i) {
    const auto& rm = problem.route(i);
    if (rm.certificate.restricted_cutoff &&
        rep.margins(idx(i)) < kCutoffWarning) {
      std::ostringstream msg;
      msg << "route \"" << net.routes()[i].id << "\": u = " << res.u(idx(i))
          << " is within 1e-3 of the restricted-domain cutoff "
          << *rm.certificate.restricted_cutoff;
      diag.boundary_warnings.push_back(msg.str());
    }
  }
  for (auto j : rep.binding_links) {
    diag.boundary_warnings.push_back("link \"" + net.links()[j].id +
                                     "\": capacity constraint near active");
  }
  for (auto i : rep.binding_routes) {
    diag.boundary_warnings.push_back("route \"" + net.routes()[i].id +
                                     "\": threshold constraint near active");
  }

  const bool near_active = !rep.binding_links.empty() || !rep.binding_routes.empty();
  if (!reached_gap) {
    res.status = SolveStatus::MaxIterations;
  } else if (near_active && diag.final_gradient_norm > kStationarityTol) {
    res.status = SolveStatus::BoundarySupremum;
  } else {
    res.status = SolveStatus::Converged;
  }
  res.diagnostics = std::move(diag);
  return res;
}

SolveResult solve(const Problem& problem, const SolverConfig& config) {
  return solve_from(problem, find_interior_point(problem), config);
}

SolveResult multistart_solve(const Problem& problem, const SolverConfig& config) {
  config.validate();
  const VectorXd y0 = find_interior_point(problem);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> decades(0.0, 3.0);
  std::vector<VectorXd> starts{y0};
  for (int k = 1; k < config.multistart_count; ++k) {
    VectorXd y = y0;
    for (Index i = 0; i < y.size(); ++i) y(i) -= std::log(10.0) * decades(rng);
    starts.push_back(std::move(y));
  }

  std::vector<std::future<SolveResult>> runs;
  for (const auto& start : starts) {
    runs.push_back(std::async(std::launch::async, [&problem, &config, start] {
      return solve_from(problem, start, config);
    }));
  }
  std::optional<SolveResult> best;
  std::string failures;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    try {
      auto res = runs[k].get();
      if (!best || res.objective < best->objective) best = std::move(res);
    } catch (const std::exception& e) {
      failures += "start " + std::to_string(k) + ": " + e.what() + "; ";
    }
  }
  if (!best) throw std::runtime_error("all multistart runs failed: " + failures);
  best->diagnostics.starts = static_cast<int>(starts.size());
  best->certified = problem.certified();
  return std::move(*best);
}

SolveResult solve_auto(const Problem& problem, const SolverConfig& config) {
  return problem.certified() ? solve(problem, config)
                             : multistart_solve(problem, config);
}

double kkt_residual(const Problem& problem, const VectorXd& y) {
  const auto rep = feasibility(problem, y);
  if (!rep.feasible) throw InfeasibleError("KKT residual needs a strictly feasible point");
  const VectorXd grad = objective_gradient(problem, y);
  if (rep.binding_links.empty() && rep.binding_routes.empty()) {
    return grad.cwiseAbs().maxCoeff();
  }

  // Gradients of the near-active constraints written as c(y) <= 0.
  const auto& net = problem.network();
  const auto p = eval_point(net, y);
  std::vector<VectorXd> cols;
  for (auto j : rep.binding_links) {
    cols.push_back((net.incidence().row(idx(j)).transpose().array() * p.x.array()).matrix());
  }
  if (!rep.binding_routes.empty()) {
    const auto jets = route_u_jets(net, p, false);
    for (auto i : rep.binding_routes) cols.push_back(-jets[i].gradient);
  }

  // Non-negative least squares by dropping the most negative multiplier.
  std::vector<std::size_t> active(cols.size());
  for (std::size_t k = 0; k < active.size(); ++k) active[k] = k;
  VectorXd residual = grad;
  while (!active.empty()) {
    MatrixXd g(grad.size(), idx(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k) g.col(idx(k)) = cols[active[k]];
    const VectorXd lambda = g.colPivHouseholderQr().solve(-grad);
    Index worst = 0;
    if (lambda.minCoeff(&worst) >= 0.0) {
      residual = grad + g * lambda;
      break;
    }
    active.erase(active.begin() + worst);
  }
  return residual.cwiseAbs().maxCoeff();
}

}  // namespace qnum
