#pragma once

#include "qnum/errors.hpp"
#include "qnum/measures.hpp"
#include "qnum/network.hpp"
#include "qnum/reformulation.hpp"
#include "qnum/solver.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace qnum {

/// A custom measure given by polynomial coefficients c0 + c1 w + c2 w^2 ...
struct PolynomialMeasureSpec {
  std::string id;
  std::vector<double> coefficients;
};

struct Scenario {
  std::string source;  ///< file path or "<string>"
  std::vector<LinkSpec> links;
  std::vector<RouteSpec> routes;
  std::vector<PolynomialMeasureSpec> measures;
  SolverConfig solver;
  std::vector<std::string> warnings;  ///< ignored fields, outside strict mode
};

/// Parse failures carry "source:line:column"; validation failures carry a
/// JSON pointer into the document.
class ScenarioError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

Scenario parse_scenario(const std::string& text,
                        const std::string& source = "<string>",
                        bool strict = false);

Scenario load_scenario(const std::filesystem::path& path, bool strict = false);

/// Inverse of parse_scenario up to field order and ignored fields.
nlohmann::json scenario_to_json(const Scenario& scenario);

MeasureRegistry scenario_registry(const Scenario& scenario);
NetworkModel scenario_network(const Scenario& scenario);
Problem scenario_problem(const Scenario& scenario);

}  // namespace qnum
