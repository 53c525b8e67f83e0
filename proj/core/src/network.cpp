#include "qnum/network.hpp"

#include "qnum/errors.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace qnum {

namespace {

constexpr double kRateConstantRelTol = 1e-6;

std::string join(const std::vector<std::string>& items) {
  std::ostringstream out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out << ", ";
    out << '"' << items[k] << '"';
  }
  return out.str();
}

void validate_physical(const PhysicalLinkParams& p) {
  if (!(p.attempt_period > 0.0) || !std::isfinite(p.attempt_period)) {
    throw ValidationError("attempt period must be positive");
  }
  if (!(p.kappa > 0.0 && p.kappa < 1.0)) {
    throw ValidationError("kappa must lie in (0, 1)");
  }
  if (!(p.length_km >= 0.0) || !std::isfinite(p.length_km)) {
    throw ValidationError("link length must be non-negative");
  }
}

}  // namespace

double derive_rate_constant(const PhysicalLinkParams& params) {
  validate_physical(params);
  const double eta = std::pow(10.0, -0.02 * params.length_km);
  return 3.0 * params.kappa * eta / (2.0 * params.attempt_period);
}

double link_capacity(double d, double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw DomainError("Werner parameter must lie in [0, 1]");
  }
  if (!(d > 0.0)) {
    throw DomainError("rate constant must be positive");
  }
  return d * (1.0 - w);
}

std::optional<std::size_t> NetworkModel::find_link(const std::string& id) const {
  for (std::size_t j = 0; j < links_.size(); ++j) {
    if (links_[j].id == id) return j;
  }
  return std::nullopt;
}

std::optional<std::size_t> NetworkModel::find_route(const std::string& id) const {
  for (std::size_t i = 0; i < routes_.size(); ++i) {
    if (routes_[i].id == id) return i;
  }
  return std::nullopt;
}

NetworkModel build_network(std::vector<LinkSpec> links,
                           std::vector<RouteSpec> routes) {
  if (routes.empty()) throw ValidationError("network has no routes");

  std::unordered_map<std::string, std::size_t> link_index;
  std::vector<std::string> duplicate_links;
  for (std::size_t j = 0; j < links.size(); ++j) {
    auto& link = links[j];
    if (!link_index.emplace(link.id, j).second) {
      duplicate_links.push_back(link.id);
    }
    if (link.physical) {
      const double derived = derive_rate_constant(*link.physical);
      if (link.d == 0.0) {
        link.d = derived;
      } else if (std::abs(link.d - derived) > kRateConstantRelTol * derived) {
        std::ostringstream msg;
        msg << "link \"" << link.id << "\": d = " << link.d
            << " disagrees with physical parameters (derived " << derived
            << ")";
        throw ValidationError(msg.str());
      }
    }
    if (!(link.d > 0.0) || !std::isfinite(link.d)) {
      throw ValidationError("link \"" + link.id +
                            "\": rate constant d must be positive");
    }
  }
  if (!duplicate_links.empty()) {
    throw ValidationError("duplicate link ids: " + join(duplicate_links));
  }

  std::unordered_set<std::string> route_ids;
  std::vector<std::string> duplicate_routes, empty_routes, dangling,
      repeated;
  std::vector<bool> used(links.size(), false);
  for (const auto& route : routes) {
    if (!route_ids.insert(route.id).second) duplicate_routes.push_back(route.id);
    if (route.link_ids.empty()) empty_routes.push_back(route.id);
    std::unordered_set<std::string> seen;
    for (const auto& lid : route.link_ids) {
      if (!seen.insert(lid).second) {
        repeated.push_back(route.id + ":" + lid);
        continue;
      }
      auto it = link_index.find(lid);
      if (it == link_index.end()) {
        dangling.push_back(lid);
      } else {
        used[it->second] = true;
      }
    }
  }
  if (!duplicate_routes.empty()) {
    throw ValidationError("duplicate route ids: " + join(duplicate_routes));
  }
  if (!empty_routes.empty()) {
    throw ValidationError("routes without links: " + join(empty_routes));
  }
  if (!dangling.empty()) {
    throw ValidationError("routes reference unknown link ids: " +
                          join(dangling));
  }
  if (!repeated.empty()) {
    throw ValidationError("routes repeat a link: " + join(repeated));
  }

  NetworkModel net;
  std::unordered_map<std::string, std::size_t> kept;
  for (std::size_t j = 0; j < links.size(); ++j) {
    if (!used[j]) continue;
    kept.emplace(links[j].id, net.links_.size());
    net.links_.push_back(std::move(links[j]));
  }
  net.routes_ = std::move(routes);

  const auto l = net.links_.size();
  const auto r = net.routes_.size();
  net.incidence_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(l),
                                         static_cast<Eigen::Index>(r));
  net.d_.resize(static_cast<Eigen::Index>(l));
  for (std::size_t j = 0; j < l; ++j) {
    net.d_(static_cast<Eigen::Index>(j)) = net.links_[j].d;
  }
  net.route_links_.resize(r);
  net.link_routes_.resize(l);
  for (std::size_t i = 0; i < r; ++i) {
    for (const auto& lid : net.routes_[i].link_ids) {
      const std::size_t j = kept.at(lid);
      net.incidence_(static_cast<Eigen::Index>(j),
                     static_cast<Eigen::Index>(i)) = 1.0;
      net.route_links_[i].push_back(j);
      net.link_routes_[j].push_back(i);
    }
  }
  return net;
}

}  // namespace qnum
