#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "absconv/metric_space.hpp"

namespace absconv::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitInvalid = 2,
  kExitNegative = 3,
};

struct RunOptions {
  std::string command;  // subcommand name; must match the scenario kind
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  Validate validate = Validate::kFull;
  bool timing = false;
};

struct RunResult {
  int exit_code = kExitOk;
  nlohmann::json report;  // null when the scenario was rejected
  std::string csv;        // plot-ready table, empty when the kind has none
  std::string message;    // diagnostic for stderr
};

/// Runs one parsed scenario. Never throws: scenario and library errors are
/// mapped onto exit codes.
RunResult run_scenario(const nlohmann::json& scenario, const RunOptions& options);

/// Reads `path`, runs it, writes the report to `out` (stdout when empty) and
/// the CSV table to `csv_path` when given. Returns the exit code.
int run_scenario_file(const std::string& path, const std::string& out, const std::string& csv_path,
                      const RunOptions& options, std::ostream& err);

/// {"finite": v} | "+inf" | "-inf".
nlohmann::json ext_to_json(double raw);

}  // namespace absconv::cli
