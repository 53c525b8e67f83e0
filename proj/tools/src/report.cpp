#include "qnum/cli/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace qnum::cli {

AllocationReport make_report(const Problem& problem, const SolveResult& result) {
  const auto& net = problem.network();
  AllocationReport rep;
  for (std::size_t i = 0; i < problem.num_routes(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    rep.routes.push_back({net.routes()[i].id, result.y(k), result.x(k), result.u(k),
                          result.fidelity(k), result.measure_value(k),
                          result.route_utility(k)});
  }
  const Eigen::VectorXd load = net.incidence() * result.x;
  for (std::size_t j = 0; j < net.num_links(); ++j) {
    const auto k = static_cast<Eigen::Index>(j);
    rep.links.push_back({net.links()[j].id, net.rate_constants()(k), result.w(k), load(k)});
  }
  rep.network_utility = result.network_utility;
  rep.log_utility = -result.objective;
  rep.certificate = to_string(result.certificate);
  rep.status = to_string(result.status);
  rep.warnings = result.diagnostics.boundary_warnings;
  return rep;
}

std::string format_number(double v, int precision) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

double round_significant(double v, int precision) {
  if (!std::isfinite(v)) return v;
  return std::stod(format_number(v, precision));
}

namespace {

void table_row(std::ostream& out, const std::vector<std::string>& cells,
               const std::vector<int>& widths) {
  for (std::size_t c = 0; c < cells.size(); ++c) {
    out << (c ? "  " : "") << std::setw(widths[c]) << (c ? std::right : std::left)
        << cells[c];
  }
  out << std::left << '\n';
}

void table(std::ostream& out, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows) {
  std::vector<int> widths;
  for (const auto& h : header) widths.push_back(static_cast<int>(h.size()));
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], static_cast<int>(row[c].size()));
    }
  }
  table_row(out, header, widths);
  for (const auto& row : rows) table_row(out, row, widths);
}

std::vector<std::vector<std::string>> route_cells(const AllocationReport& r, int p) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& x : r.routes) {
    rows.push_back({x.route_id, format_number(x.y, p), format_number(x.rate, p),
                    format_number(x.werner_u, p), format_number(x.fidelity, p),
                    format_number(x.measure_value, p), format_number(x.route_utility, p)});
  }
  return rows;
}

std::vector<std::vector<std::string>> link_cells(const AllocationReport& r, int p) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& x : r.links) {
    rows.push_back({x.link_id, format_number(x.d, p), format_number(x.w, p),
                    format_number(x.capacity_used, p)});
  }
  return rows;
}

const std::vector<std::string> kRouteHeader{"route_id", "y", "rate", "werner_u",
                                            "fidelity", "measure_value", "route_utility"};
const std::vector<std::string> kLinkHeader{"link_id", "d", "w", "capacity_used"};
const std::vector<std::string> kSummaryHeader{"network_utility", "log_utility",
                                              "certificate", "status"};

void csv_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t c = 0; c < cells.size(); ++c) out << (c ? "," : "") << cells[c];
  out << '\n';
}

}  // namespace

void render_table(const AllocationReport& report, int precision, std::ostream& out) {
  table(out, kRouteHeader, route_cells(report, precision));
  out << '\n';
  table(out, kLinkHeader, link_cells(report, precision));
  out << '\n';
  out << "network_utility  " << format_number(report.network_utility, precision) << '\n'
      << "log_utility      " << format_number(report.log_utility, precision) << '\n'
      << "certificate      " << report.certificate << '\n'
      << "status           " << report.status << '\n';
}

void render_csv(const AllocationReport& report, int precision, std::ostream& out) {
  out << "# routes\n";
  csv_line(out, kRouteHeader);
  for (const auto& row : route_cells(report, precision)) csv_line(out, row);
  out << "# links\n";
  csv_line(out, kLinkHeader);
  for (const auto& row : link_cells(report, precision)) csv_line(out, row);
  out << "# summary\n";
  csv_line(out, kSummaryHeader);
  csv_line(out, {format_number(report.network_utility, precision),
                 format_number(report.log_utility, precision), report.certificate,
                 report.status});
}

nlohmann::json report_to_json(const AllocationReport& report, int precision) {
  auto num = [precision](double v) { return round_significant(v, precision); };
  nlohmann::json doc;
  doc["routes"] = nlohmann::json::array();
  for (const auto& r : report.routes) {
    doc["routes"].push_back({{"route_id", r.route_id},
                             {"y", num(r.y)},
                             {"rate", num(r.rate)},
                             {"werner_u", num(r.werner_u)},
                             {"fidelity", num(r.fidelity)},
                             {"measure_value", num(r.measure_value)},
                             {"route_utility", num(r.route_utility)}});
  }
  doc["links"] = nlohmann::json::array();
  for (const auto& l : report.links) {
    doc["links"].push_back({{"link_id", l.link_id},
                            {"d", num(l.d)},
                            {"w", num(l.w)},
                            {"capacity_used", num(l.capacity_used)}});
  }
  doc["network_utility"] = num(report.network_utility);
  doc["log_utility"] = num(report.log_utility);
  doc["certificate"] = report.certificate;
  doc["status"] = report.status;
  doc["warnings"] = report.warnings;
  return doc;
}

}  // namespace qnum::cli
