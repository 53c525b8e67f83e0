#include "qnum/cli/commands.hpp"

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <iostream>

int main(int argc, char** argv) {
  using namespace qnum::cli;
  CLI::App app{"Rate and fidelity allocation for entanglement-distribution networks", "qnum"};
  app.require_subcommand(1);

  SolveOptions solve;
  std::string solve_out;
  double tol = 0.0;
  std::uint64_t seed = 0;
  auto* s = app.add_subcommand("solve", "Solve a scenario and print the allocation");
  s->add_option("scenario", solve.scenario, "Scenario JSON file")->required();
  s->add_option("--format", solve.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  auto* tol_opt = s->add_option("--tol", tol, "Duality-measure target")->check(CLI::PositiveNumber);
  auto* seed_opt = s->add_option("--seed", seed, "Multistart seed");
  auto* out_opt = s->add_option("--out", solve_out, "Write the report to this path");
  s->add_option("--precision", solve.precision, "Significant digits")->check(CLI::Range(1, 17));
  s->add_flag("--strict", solve.strict, "Reject unknown scenario fields");

  CheckMeasureOptions check;
  std::string check_scenario;
  auto* c = app.add_subcommand("check-measure", "Report thresholds and convexity conditions");
  c->add_option("id", check.measure_id, "Measure id")->required();
  c->add_option("--grid", check.grid, "g(u) scan grid points")->check(CLI::Range(3, 100000000));
  c->add_flag("--json", check.json, "JSON output");
  auto* check_sc = c->add_option("--scenario", check_scenario, "Scenario defining custom measures");

  ExportCurvesOptions curves;
  std::string curves_out;
  std::string curves_scenario;
  auto* e = app.add_subcommand("export-curves", "Write u,f,F,dF,d2F,g samples as CSV");
  e->add_option("id", curves.measure_id, "Measure id")->required();
  e->add_option("--out", curves_out, "CSV path")->required();
  e->add_option("--grid", curves.grid, "Number of rows")->check(CLI::Range(2, 100000000));
  e->add_option("--precision", curves.precision, "Significant digits")->check(CLI::Range(1, 17));
  auto* curves_sc = e->add_option("--scenario", curves_scenario, "Scenario defining custom measures");

  OracleOptions oracle;
  auto* o = app.add_subcommand("oracle", "Compare the solver against a grid search");
  o->add_option("scenario", oracle.scenario, "Scenario JSON file (at most 3 routes)")->required();
  o->add_option("--grid", oracle.grid, "Grid points per route")->check(CLI::Range(2, 100000));
  o->add_flag("--strict", oracle.strict, "Reject unknown scenario fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitInvalidInput;
  }

  if (*s) {
    if (*tol_opt) solve.tol = tol;
    if (*seed_opt) solve.seed = seed;
    if (*out_opt) solve.out = solve_out;
    return cmd_solve(solve, std::cout, std::cerr);
  }
  if (*c) {
    if (*check_sc) check.scenario = check_scenario;
    return cmd_check_measure(check, std::cout, std::cerr);
  }
  if (*e) {
    curves.out = curves_out;
    if (*curves_sc) curves.scenario = curves_scenario;
    return cmd_export_curves(curves, std::cout, std::cerr);
  }
  return cmd_oracle(oracle, std::cout, std::cerr);
}
