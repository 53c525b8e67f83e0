#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace qnum::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitMaxIterations = 2,
  kExitInvalidInput = 3,
};

struct SolveOptions {
  std::filesystem::path scenario;
  std::string format = "table";  ///< table, csv or json
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  int precision = 6;
  bool strict = false;
};

struct CheckMeasureOptions {
  std::string measure_id;
  int grid = 100000;
  bool json = false;
  std::optional<std::filesystem::path> scenario;  ///< source of custom measures
};

struct ExportCurvesOptions {
  std::string measure_id;
  std::filesystem::path out;
  int grid = 2001;
  int precision = 10;
  std::optional<std::filesystem::path> scenario;
};

struct OracleOptions {
  std::filesystem::path scenario;
  int grid = 400;
  bool strict = false;
};

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err);
int cmd_check_measure(const CheckMeasureOptions& opts, std::ostream& out, std::ostream& err);
int cmd_export_curves(const ExportCurvesOptions& opts, std::ostream& out, std::ostream& err);
int cmd_oracle(const OracleOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace qnum::cli
