#pragma once

#include "qnum/reformulation.hpp"
#include "qnum/solver.hpp"

#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace qnum::cli {

struct RouteRow {
  std::string route_id;
  double y = 0.0;
  double rate = 0.0;
  double werner_u = 0.0;
  double fidelity = 0.0;
  double measure_value = 0.0;
  double route_utility = 0.0;
};

struct LinkRow {
  std::string link_id;
  double d = 0.0;
  double w = 0.0;
  double capacity_used = 0.0;  ///< <A_j, x>, pairs per second
};

struct AllocationReport {
  std::vector<RouteRow> routes;
  std::vector<LinkRow> links;
  double network_utility = 0.0;
  double log_utility = 0.0;
  std::string certificate;
  std::string status;
  std::vector<std::string> warnings;
};

AllocationReport make_report(const Problem& problem, const SolveResult& result);

/// Rounds to `precision` significant digits, the policy shared by all formats.
double round_significant(double v, int precision);
std::string format_number(double v, int precision);

void render_table(const AllocationReport& report, int precision, std::ostream& out);
void render_csv(const AllocationReport& report, int precision, std::ostream& out);
nlohmann::json report_to_json(const AllocationReport& report, int precision);

}  // namespace qnum::cli
