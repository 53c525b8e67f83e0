#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qnum {

/// Physical attributes of a heralded single-photon link.
struct PhysicalLinkParams {
  double length_km = 0.0;
  double kappa = 0.1;           ///< non-fibre inefficiency, in (0, 1)
  double attempt_period = 1e-3; ///< seconds between generation attempts
};

struct LinkSpec {
  std::string id;
  double d = 0.0;  ///< pairs/s per unit (1 - w); 0 means derive from `physical`
  std::optional<PhysicalLinkParams> physical;
};

struct RouteSpec {
  std::string id;
  std::vector<std::string> link_ids;
  std::string measure_id;
};

/// d = 3 kappa eta / (2 T) with fibre transmissivity eta = 10^(-0.02 L).
double derive_rate_constant(const PhysicalLinkParams& params);

/// Rate capacity d (1 - w) of a link producing Werner parameter w.
double link_capacity(double d, double w);

/// Links, routes and their binary incidence. Immutable after build.
///
/// Link index j and route index i follow declaration order; links that no
/// route references are dropped.
class NetworkModel {
 public:
  std::size_t num_links() const noexcept { return links_.size(); }
  std::size_t num_routes() const noexcept { return routes_.size(); }

  const std::vector<LinkSpec>& links() const noexcept { return links_; }
  const std::vector<RouteSpec>& routes() const noexcept { return routes_; }

  /// l x r matrix with A(j, i) = 1 iff route i uses link j.
  const Eigen::MatrixXd& incidence() const noexcept { return incidence_; }

  /// Rate constants d_j in link order.
  const Eigen::VectorXd& rate_constants() const noexcept { return d_; }

  /// Link indices of route i, in the route's declared order.
  std::span<const std::size_t> route_links(std::size_t i) const {
    return route_links_.at(i);
  }
  /// Route indices passing through link j, ascending.
  std::span<const std::size_t> link_routes(std::size_t j) const {
    return link_routes_.at(j);
  }

  std::optional<std::size_t> find_link(const std::string& id) const;
  std::optional<std::size_t> find_route(const std::string& id) const;

  friend NetworkModel build_network(std::vector<LinkSpec> links,
                                    std::vector<RouteSpec> routes);

 private:
  NetworkModel() = default;

  std::vector<LinkSpec> links_;
  std::vector<RouteSpec> routes_;
  Eigen::MatrixXd incidence_;
  Eigen::VectorXd d_;
  std::vector<std::vector<std::size_t>> route_links_;
  std::vector<std::vector<std::size_t>> link_routes_;
};

/// Validates ids and references, drops unreferenced links, and materialises
/// the incidence matrix. Throws ValidationError listing every offending id.
NetworkModel build_network(std::vector<LinkSpec> links,
                           std::vector<RouteSpec> routes);

}  // namespace qnum
