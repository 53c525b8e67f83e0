#include "qnum/scenario.hpp"

#include "qnum/errors.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace qnum {

namespace {

using nlohmann::json;

class Reader {
 public:
  Reader(std::string source, bool strict, std::vector<std::string>& warnings)
      : source_(std::move(source)), strict_(strict), warnings_(warnings) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& what) const {
    throw ScenarioError(source_ + ": " + pointer + ": " + what);
  }

  void check_fields(const json& obj, const std::string& pointer,
                    std::initializer_list<const char*> known) {
    for (const auto& [key, value] : obj.items()) {
      const bool ok = std::any_of(known.begin(), known.end(),
                                  [&](const char* k) { return key == k; });
      if (ok) continue;
      if (strict_) fail(pointer + "/" + key, "unknown field");
      warnings_.push_back(source_ + ": " + pointer + "/" + key +
                          ": unknown field ignored");
    }
  }

  const json& object(const json& v, const std::string& pointer) const {
    if (!v.is_object()) fail(pointer, "expected an object");
    return v;
  }

  const json& array(const json& obj, const char* key, const std::string& pointer) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(pointer + "/" + key, "missing required array");
    if (!it->is_array()) fail(pointer + "/" + key, "expected an array");
    return *it;
  }

  std::string string(const json& obj, const char* key, const std::string& pointer) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(pointer + "/" + key, "missing required string");
    if (!it->is_string() || it->get<std::string>().empty()) {
      fail(pointer + "/" + key, "expected a non-empty string");
    }
    return it->get<std::string>();
  }

  std::optional<double> number(const json& obj, const char* key,
                               const std::string& pointer) const {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_number()) fail(pointer + "/" + key, "expected a number");
    return it->get<double>();
  }

 private:
  std::string source_;
  bool strict_;
  std::vector<std::string>& warnings_;
};

std::string position_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const auto end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t k = 0; k < end; ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return std::to_string(line) + ":" + std::to_string(column);
}

bool is_builtin(const std::string& id) {
  return id == "sk" || id == "de" || id == "neg" || id == "succ";
}

void read_links(Reader& in, const json& doc, Scenario& sc) {
  const auto& links = in.array(doc, "links", "");
  std::set<std::string> seen;
  for (std::size_t k = 0; k < links.size(); ++k) {
    const std::string ptr = "/links/" + std::to_string(k);
    const auto& obj = in.object(links[k], ptr);
    in.check_fields(obj, ptr, {"id", "d", "length_km", "kappa", "attempt_period_s"});
    LinkSpec link;
    link.id = in.string(obj, "id", ptr);
    if (!seen.insert(link.id).second) {
      in.fail(ptr + "/id", "duplicate link id \"" + link.id + "\"");
    }
    const auto d = in.number(obj, "d", ptr);
    const auto length = in.number(obj, "length_km", ptr);
    const auto kappa = in.number(obj, "kappa", ptr);
    const auto period = in.number(obj, "attempt_period_s", ptr);
    if (d) {
      if (!(*d > 0.0)) in.fail(ptr + "/d", "must be positive");
      link.d = *d;
    }
    if (length || kappa || period) {
      if (!length) in.fail(ptr + "/length_km", "required with kappa or attempt_period_s");
      PhysicalLinkParams p;
      p.length_km = *length;
      if (kappa) p.kappa = *kappa;
      if (period) p.attempt_period = *period;
      link.physical = p;
      try {
        derive_rate_constant(p);
      } catch (const std::exception& e) {
        in.fail(ptr, e.what());
      }
    }
    if (!d && !link.physical) in.fail(ptr, "needs d or length_km");
    sc.links.push_back(std::move(link));
  }
}

void read_measures(Reader& in, const json& doc, Scenario& sc) {
  if (!doc.contains("measures")) return;
  const auto& measures = in.array(doc, "measures", "");
  for (std::size_t k = 0; k < measures.size(); ++k) {
    const std::string ptr = "/measures/" + std::to_string(k);
    const auto& obj = in.object(measures[k], ptr);
    in.check_fields(obj, ptr, {"id", "polynomial"});
    PolynomialMeasureSpec spec;
    spec.id = in.string(obj, "id", ptr);
    if (is_builtin(spec.id)) in.fail(ptr + "/id", "cannot redefine builtin measure");
    for (const auto& other : sc.measures) {
      if (other.id == spec.id) in.fail(ptr + "/id", "duplicate measure id \"" + spec.id + "\"");
    }
    const auto& coeffs = in.array(obj, "polynomial", ptr);
    if (coeffs.empty()) in.fail(ptr + "/polynomial", "needs at least one coefficient");
    for (std::size_t c = 0; c < coeffs.size(); ++c) {
      if (!coeffs[c].is_number()) {
        in.fail(ptr + "/polynomial/" + std::to_string(c), "expected a number");
      }
      spec.coefficients.push_back(coeffs[c].get<double>());
    }
    sc.measures.push_back(std::move(spec));
  }
}

void read_routes(Reader& in, const json& doc, Scenario& sc) {
  const auto& routes = in.array(doc, "routes", "");
  std::set<std::string> link_ids;
  for (const auto& l : sc.links) link_ids.insert(l.id);
  std::set<std::string> seen;
  for (std::size_t k = 0; k < routes.size(); ++k) {
    const std::string ptr = "/routes/" + std::to_string(k);
    const auto& obj = in.object(routes[k], ptr);
    in.check_fields(obj, ptr, {"id", "measure", "links"});
    RouteSpec route;
    route.id = in.string(obj, "id", ptr);
    if (!seen.insert(route.id).second) {
      in.fail(ptr + "/id", "duplicate route id \"" + route.id + "\"");
    }
    route.measure_id = in.string(obj, "measure", ptr);
    const bool custom = std::any_of(sc.measures.begin(), sc.measures.end(),
                                    [&](const auto& m) { return m.id == route.measure_id; });
    if (!is_builtin(route.measure_id) && !custom) {
      in.fail(ptr + "/measure", "unknown measure \"" + route.measure_id + "\"");
    }
    const auto& links = in.array(obj, "links", ptr);
    if (links.empty()) in.fail(ptr + "/links", "route has no links");
    std::set<std::string> on_route;
    for (std::size_t j = 0; j < links.size(); ++j) {
      const std::string lptr = ptr + "/links/" + std::to_string(j);
      if (!links[j].is_string()) in.fail(lptr, "expected a link id string");
      auto id = links[j].get<std::string>();
      if (!link_ids.count(id)) in.fail(lptr, "unknown link id \"" + id + "\"");
      if (!on_route.insert(id).second) in.fail(lptr, "link \"" + id + "\" repeated on route");
      route.link_ids.push_back(std::move(id));
    }
    sc.routes.push_back(std::move(route));
  }
}

void read_solver(Reader& in, const json& doc, Scenario& sc) {
  auto it = doc.find("solver");
  if (it == doc.end()) return;
  const auto& obj = in.object(*it, "/solver");
  in.check_fields(obj, "/solver",
                  {"tol", "newton_tol", "barrier_t0", "barrier_mu", "backtrack_alpha",
                   "backtrack_beta", "max_outer", "max_newton", "feasibility_margin",
                   "multistart_count", "seed"});
  auto& cfg = sc.solver;
  auto real = [&](const char* key, double& field) {
    if (auto v = in.number(obj, key, "/solver")) field = *v;
  };
  auto integer = [&](const char* key, auto& field) {
    auto f = obj.find(key);
    if (f == obj.end()) return;
    if (!f->is_number_integer()) in.fail(std::string("/solver/") + key, "expected an integer");
    if constexpr (std::is_unsigned_v<std::remove_reference_t<decltype(field)>>) {
      if (f->is_number_unsigned() || f->template get<long long>() >= 0) {
        field = f->template get<std::uint64_t>();
        return;
      }
      in.fail(std::string("/solver/") + key, "must be non-negative");
    } else {
      field = f->template get<int>();
    }
  };
  real("tol", cfg.tol);
  real("newton_tol", cfg.newton_tol);
  real("barrier_t0", cfg.barrier_t0);
  real("barrier_mu", cfg.barrier_mu);
  real("backtrack_alpha", cfg.backtrack_alpha);
  real("backtrack_beta", cfg.backtrack_beta);
  integer("max_outer", cfg.max_outer);
  integer("max_newton", cfg.max_newton);
  real("feasibility_margin", cfg.feasibility_margin);
  integer("multistart_count", cfg.multistart_count);
  integer("seed", cfg.seed);
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    in.fail("/solver", e.what());
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source, bool strict) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(source + ":" + position_of(text, e.byte) + ": " + e.what());
  }
  Scenario sc;
  sc.source = source;
  Reader in(source, strict, sc.warnings);
  in.object(doc, "");
  in.check_fields(doc, "", {"links", "routes", "measures", "solver"});
  read_links(in, doc, sc);
  read_measures(in, doc, sc);
  read_routes(in, doc, sc);
  read_solver(in, doc, sc);
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path, bool strict) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_scenario(buf.str(), path.string(), strict);
}

nlohmann::json scenario_to_json(const Scenario& scenario) {
  json doc;
  doc["links"] = json::array();
  for (const auto& l : scenario.links) {
    json j{{"id", l.id}};
    if (l.d > 0.0) j["d"] = l.d;
    if (l.physical) {
      j["length_km"] = l.physical->length_km;
      j["kappa"] = l.physical->kappa;
      j["attempt_period_s"] = l.physical->attempt_period;
    }
    doc["links"].push_back(std::move(j));
  }
  doc["routes"] = json::array();
  for (const auto& r : scenario.routes) {
    doc["routes"].push_back({{"id", r.id}, {"measure", r.measure_id}, {"links", r.link_ids}});
  }
  if (!scenario.measures.empty()) {
    doc["measures"] = json::array();
    for (const auto& m : scenario.measures) {
      doc["measures"].push_back({{"id", m.id}, {"polynomial", m.coefficients}});
    }
  }
  const auto& c = scenario.solver;
  doc["solver"] = {{"tol", c.tol},
                   {"newton_tol", c.newton_tol},
                   {"barrier_t0", c.barrier_t0},
                   {"barrier_mu", c.barrier_mu},
                   {"backtrack_alpha", c.backtrack_alpha},
                   {"backtrack_beta", c.backtrack_beta},
                   {"max_outer", c.max_outer},
                   {"max_newton", c.max_newton},
                   {"feasibility_margin", c.feasibility_margin},
                   {"multistart_count", c.multistart_count},
                   {"seed", c.seed}};
  return doc;
}

MeasureRegistry scenario_registry(const Scenario& scenario) {
  MeasureRegistry registry;
  for (const auto& m : scenario.measures) {
    registry.add(MeasureModel::polynomial(m.id, m.coefficients));
  }
  return registry;
}

NetworkModel scenario_network(const Scenario& scenario) {
  return build_network(scenario.links, scenario.routes);
}

Problem scenario_problem(const Scenario& scenario) {
  return Problem(scenario_network(scenario), scenario_registry(scenario));
}

}  // namespace qnum
