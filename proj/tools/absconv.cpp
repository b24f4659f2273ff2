#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "scenario.hpp"

int main(int argc, char** argv) {
  using absconv::cli::RunOptions;

  CLI::App app{"Abstract-convexity duality scenarios on finite domains"};
  app.require_subcommand(1);

  std::string scenario, out, csv, validate = "full";
  std::uint64_t seed = 0;
  double tol = 0.0;
  bool timing = false;

  for (const char* name : {"conjugate", "gap", "certify", "constrained", "transport", "conic", "peaking"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run a '") + name + "' scenario");
    sub->add_option("--scenario", scenario, "scenario JSON file")->required();
    sub->add_option("--out", out, "report path (default stdout)");
    sub->add_option("--seed", seed, "seed for randomized scenarios (overrides the scenario)");
    sub->add_option("--tol", tol, "zero-gap tolerance (default 1e-9)")->check(CLI::NonNegativeNumber);
    sub->add_option("--validate", validate, "metric validation level")
        ->check(CLI::IsMember({"full", "fast"}));
    sub->add_option("--csv", csv, "write the plot-ready table here");
    sub->add_flag("--timing", timing, "add wall-clock timing to the report");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : absconv::cli::kExitInvalid;
  }

  RunOptions opt;
  const CLI::App* sub = app.get_subcommands().front();
  opt.command = sub->get_name();
  if (sub->count("--seed")) opt.seed = seed;
  if (sub->count("--tol")) opt.tol = tol;
  opt.validate = validate == "fast" ? absconv::Validate::kFast : absconv::Validate::kFull;
  opt.timing = timing;
  return absconv::cli::run_scenario_file(scenario, out, csv, opt, std::cerr);
}
