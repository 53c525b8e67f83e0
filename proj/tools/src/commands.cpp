#include "qnum/cli/commands.hpp"

#include "qnum/cli/report.hpp"
#include "qnum/qnum.hpp"

#include <fstream>
#include <iomanip>
#include <limits>

namespace qnum::cli {

namespace {

using nlohmann::json;

// Runs a command body and maps exceptions to exit codes.
template <class Body>
int guarded(std::ostream& err, const std::string& context, Body&& body) {
  auto where = [&](const std::string& what) {
    if (context.empty() || what.rfind(context, 0) == 0) return what;
    return context + ": " + what;
  };
  try {
    return body();
  } catch (const ValidationError& e) {
    err << "error: " << where(e.what()) << '\n';
    return kExitInvalidInput;
  } catch (const UnsupportedSizeError& e) {
    err << "error: " << where(e.what()) << '\n';
    return kExitInvalidInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << where(e.what()) << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << where(e.what()) << '\n';
    return kExitFailure;
  }
}

Scenario load(const std::filesystem::path& path, bool strict, std::ostream& err) {
  auto sc = load_scenario(path, strict);
  for (const auto& w : sc.warnings) err << "warning: " << w << '\n';
  return sc;
}

MeasureModel resolve_measure(const std::string& id,
                             const std::optional<std::filesystem::path>& scenario,
                             std::ostream& err) {
  MeasureRegistry registry;
  if (scenario) registry = scenario_registry(load(*scenario, false, err));
  if (const auto* m = registry.find(id)) return *m;
  std::string known;
  for (const auto& k : registry.ids()) known += (known.empty() ? "" : ", ") + k;
  throw ValidationError("unknown measure \"" + id + "\" (known: " + known + ")");
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  return file;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, opts.scenario.string(), [&] {
    if (opts.format != "table" && opts.format != "csv" && opts.format != "json") {
      throw ValidationError("unknown format \"" + opts.format + "\"");
    }
    if (opts.precision < 1 || opts.precision > 17) {
      throw ValidationError("precision must lie in [1, 17]");
    }
    auto sc = load(opts.scenario, opts.strict, err);
    if (opts.tol) sc.solver.tol = *opts.tol;
    if (opts.seed) sc.solver.seed = *opts.seed;
    const auto problem = scenario_problem(sc);
    const auto result = solve_auto(problem, sc.solver);
    const auto report = make_report(problem, result);
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';

    std::ofstream file;
    if (opts.out) file = open_output(*opts.out);
    std::ostream& sink = opts.out ? static_cast<std::ostream&>(file) : out;
    if (opts.format == "table") {
      render_table(report, opts.precision, sink);
    } else if (opts.format == "csv") {
      render_csv(report, opts.precision, sink);
    } else {
      sink << report_to_json(report, opts.precision).dump(2) << '\n';
    }
    return result.status == SolveStatus::MaxIterations ? kExitMaxIterations : kExitOk;
  });
}

int cmd_check_measure(const CheckMeasureOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, "", [&] {
    if (opts.grid < 3) throw ValidationError("grid must be at least 3");
    const auto m = resolve_measure(opts.measure_id, opts.scenario, err);
    const auto cert = certify(m, opts.grid);
    if (opts.json) {
      json doc{{"measure", m.id()},
               {"c", cert.zero_threshold},
               {"c1", optional_number(cert.inflection)},
               {"cond1", cert.cond1_pass},
               {"certificate", to_string(cert.cls)}};
      if (cert.cond2) {
        const auto& c2 = *cert.cond2;
        doc["cond2"] = {{"passed", c2.passed()},
                        {"vacuous", c2.vacuous},
                        {"min_g", c2.vacuous ? json(nullptr) : json(c2.min_g)},
                        {"argmin_u", c2.vacuous ? json(nullptr) : json(c2.argmin_u)},
                        {"grid_points", c2.grid_points},
                        {"denominator_failure_u", optional_number(c2.denominator_failure_u)}};
      } else {
        doc["cond2"] = nullptr;
      }
      doc["restricted_cutoff"] = optional_number(cert.restricted_cutoff);
      if (cert.note) doc["note"] = *cert.note;
      out << doc.dump(2) << '\n';
      return kExitOk;
    }
    out << std::setprecision(8);
    out << "measure      " << m.id() << '\n';
    out << "c            " << cert.zero_threshold << '\n';
    out << "c1           ";
    if (cert.inflection) {
      out << *cert.inflection << '\n';
    } else {
      out << "none\n";
    }
    out << "cond1        " << (cert.cond1_pass ? "pass" : "fail") << '\n';
    out << "cond2        ";
    if (!cert.cond2) {
      out << "not applicable\n";
    } else if (cert.cond2->vacuous) {
      out << "pass (vacuous)\n";
    } else {
      out << (cert.cond2->passed() ? "pass" : "fail") << " (min_g " << cert.cond2->min_g
          << " at u = " << cert.cond2->argmin_u << ")\n";
    }
    if (cert.restricted_cutoff) out << "cutoff       " << *cert.restricted_cutoff << '\n';
    out << "certificate  " << to_string(cert.cls) << '\n';
    if (cert.note) out << "note         " << *cert.note << '\n';
    return kExitOk;
  });
}

int cmd_export_curves(const ExportCurvesOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, "", [&] {
    if (opts.grid < 2) throw ValidationError("grid must be at least 2");
    const auto m = resolve_measure(opts.measure_id, opts.scenario, err);
    const double lo = m.threshold() + 1e-6;
    const double hi = 1.0 - 1e-6;
    // g is reported where the g(u) condition is evaluated.
    std::optional<double> g_from;
    if (auto c1 = inflection_point(m)) {
      g_from = *c1;
    } else if (log_curvature_sign(m) > 0) {
      g_from = m.threshold();
    }

    auto file = open_output(opts.out);
    file << std::setprecision(opts.precision);
    file << "u,f,F,dF,d2F,g\n";
    for (int k = 0; k < opts.grid; ++k) {
      const double u = lo + (hi - lo) * k / (opts.grid - 1);
      file << u << ',' << m.value(u) << ',' << m.log_value(u) << ',' << m.log_d1(u) << ','
           << m.log_d2(u) << ',';
      if (g_from && u > *g_from) {
        try {
          file << cond2_margin(m, u);
        } catch (const DomainError&) {
        }
      }
      file << '\n';
    }
    if (!file) throw std::runtime_error("failed writing " + opts.out.string());
    out << "wrote " << opts.grid << " rows to " << opts.out.string() << '\n';
    return kExitOk;
  });
}

int cmd_oracle(const OracleOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, opts.scenario.string(), [&] {
    auto sc = load(opts.scenario, opts.strict, err);
    const auto problem = scenario_problem(sc);
    if (problem.num_routes() > 3) {
      throw UnsupportedSizeError("oracle supports at most 3 routes, scenario has " +
                                 std::to_string(problem.num_routes()));
    }
    const auto result = solve_auto(problem, sc.solver);
    OracleConfig cfg;
    cfg.grid_points_per_dim = opts.grid;
    const auto grid = grid_search(problem, cfg);

    auto vec = [](const Eigen::VectorXd& v) {
      return std::vector<double>(v.data(), v.data() + v.size());
    };
    const double gap = result.network_utility - grid.utility;
    json doc{{"solver",
              {{"x", vec(result.x)},
               {"utility", result.network_utility},
               {"status", to_string(result.status)},
               {"certificate", to_string(result.certificate)}}},
             {"oracle",
              {{"x", vec(grid.x)},
               {"utility", grid.utility},
               {"grid_points_per_dim", opts.grid},
               {"log_step", grid.log_step},
               {"evaluated", grid.evaluated},
               {"skipped", grid.skipped}}},
             {"gap", gap},
             {"relative_gap", gap / result.network_utility}};
    out << std::setprecision(std::numeric_limits<double>::max_digits10) << doc.dump(2) << '\n';
    return result.status == SolveStatus::MaxIterations ? kExitMaxIterations : kExitOk;
  });
}

}  // namespace qnum::cli
