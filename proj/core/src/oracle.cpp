#include "qnum/oracle.hpp"

#include "qnum/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

namespace qnum {

namespace {

constexpr std::size_t kMaxRoutes = 3;
constexpr double kLowerFraction = 1e-6;

struct Best {
  double log_utility = -std::numeric_limits<double>::infinity();
  std::size_t flat = std::numeric_limits<std::size_t>::max();
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

// ln of prod_i x_i f_i(u_i); -inf when the point is outside the domain.
double log_utility_at(const Problem& problem, const std::array<double, kMaxRoutes>& x) {
  const auto& net = problem.network();
  const auto r = problem.num_routes();
  std::array<double, kMaxRoutes> log_u{};
  for (std::size_t j = 0; j < net.num_links(); ++j) {
    double load = 0.0;
    for (auto i : net.link_routes(j)) load += x[i];
    const double w = 1.0 - load / net.rate_constants()(static_cast<Eigen::Index>(j));
    if (!(w > 0.0)) return -std::numeric_limits<double>::infinity();
    for (auto i : net.link_routes(j)) log_u[i] += std::log(w);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    const double u = std::exp(log_u[i]);
    const auto& rm = problem.route(i);
    if (!(u > rm.threshold)) return -std::numeric_limits<double>::infinity();
    const double f = rm.measure.value(u);
    if (!(f > 0.0)) return -std::numeric_limits<double>::infinity();
    total += std::log(x[i]) + std::log(f);
  }
  return total;
}

}  // namespace

OracleResult grid_search(const Problem& problem, const OracleConfig& config) {
  const auto r = problem.num_routes();
  if (r > kMaxRoutes) {
    throw UnsupportedSizeError("grid search supports at most 3 routes, got " +
                               std::to_string(r));
  }
  if (config.grid_points_per_dim < 2) {
    throw ValidationError("grid_points_per_dim must be at least 2");
  }
  const auto& net = problem.network();
  const auto n = static_cast<std::size_t>(config.grid_points_per_dim);

  OracleResult out;
  out.upper_bounds.resize(static_cast<Eigen::Index>(r));
  for (std::size_t i = 0; i < r; ++i) {
    double b = std::numeric_limits<double>::infinity();
    for (auto j : net.route_links(i)) {
      b = std::min(b, net.rate_constants()(static_cast<Eigen::Index>(j)));
    }
    out.upper_bounds(static_cast<Eigen::Index>(i)) = b;
  }
  out.log_step = -std::log(kLowerFraction) / static_cast<double>(n);

  // Per-route grid values, ascending. b itself is left out (the tightest link
  // saturates there), so the grid for k * n points contains the one for n.
  std::vector<std::vector<double>> axis(r, std::vector<double>(n));
  for (std::size_t i = 0; i < r; ++i) {
    const double log_hi = std::log(out.upper_bounds(static_cast<Eigen::Index>(i)));
    for (std::size_t k = 0; k < n; ++k) {
      axis[i][k] = std::exp(log_hi - out.log_step * static_cast<double>(n - k));
    }
  }

  std::size_t total = 1;
  for (std::size_t i = 0; i < r; ++i) total *= n;

  unsigned workers = config.threads ? config.threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  std::vector<Best> partial(workers);
  auto scan = [&](unsigned t) {
    Best& best = partial[t];
    const std::size_t lo = total * t / workers;
    const std::size_t hi = total * (t + 1) / workers;
    std::array<double, kMaxRoutes> x{};
    for (std::size_t flat = lo; flat < hi; ++flat) {
      std::size_t rest = flat;
      for (std::size_t i = 0; i < r; ++i) {
        x[i] = axis[i][rest % n];
        rest /= n;
      }
      const double v = log_utility_at(problem, x);
      if (!std::isfinite(v)) {
        ++best.skipped;
        continue;
      }
      ++best.evaluated;
      if (v > best.log_utility) {
        best.log_utility = v;
        best.flat = flat;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(scan, t);
  scan(0);
  for (auto& th : pool) th.join();

  Best best;
  for (const auto& p : partial) {
    best.evaluated += p.evaluated;
    best.skipped += p.skipped;
    if (p.log_utility > best.log_utility ||
        (p.log_utility == best.log_utility && p.flat < best.flat)) {
      best.log_utility = p.log_utility;
      best.flat = p.flat;
    }
  }
  if (best.flat == std::numeric_limits<std::size_t>::max()) {
    throw InfeasibleError("no feasible grid point");
  }
  out.x.resize(static_cast<Eigen::Index>(r));
  std::size_t rest = best.flat;
  for (std::size_t i = 0; i < r; ++i) {
    out.x(static_cast<Eigen::Index>(i)) = axis[i][rest % n];
    rest /= n;
  }
  out.log_utility = best.log_utility;
  out.utility = std::exp(best.log_utility);
  out.evaluated = best.evaluated;
  out.skipped = best.skipped;
  return out;
}

}  // namespace qnum
