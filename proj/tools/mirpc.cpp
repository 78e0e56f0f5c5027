// mirpc: command-line front end for the up-conversion detector models.
//
//   mirpc efficiency  --config paper_25C
//   mirpc simulate    --config paper_25C --seed 7 --duration 600 --format csv --out hist.csv
//   mirpc optimize    --config paper_25C --sweep pump.power --grid 0.063,0.5,1

#include <CLI11.hpp>
#include <iostream>

#include "mirpc/errors.hpp"
#include "mirpc/workbench/commands.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kDomainError = 3, kIoError = 4 };

}  // namespace

int main(int argc, char** argv) {
  using namespace mirpc;
  using namespace mirpc::workbench;

  CLI::App app{"Mid-infrared up-conversion photon-counting workbench", "mirpc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string config = "paper_25C";
  std::string out_path;
  std::string format = "text";
  bool strict = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::string catalog;
  std::string sweep_parameter;
  CommandOptions options;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Scenario TOML file or bundled scenario name")
        ->capture_default_str();
    sub->add_option("--out", out_path, "Write the report here instead of stdout");
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    sub->add_flag("--strict", strict, "Reject unknown scenario keys");
  };

  const std::pair<const char*, const char*> commands[] = {
      {"efficiency", "Up-conversion efficiency budget and gap to theory"},
      {"noise", "Thermal background and total noise rates"},
      {"sensitivity", "SNR0 and its background-limited floor"},
      {"simulate", "Monte Carlo photon counting and TAC histogram"},
      {"optimize", "Crystal length optimum, parameter sweeps, pump-power trade-off"},
      {"compare", "Rank the design against a detector catalog"}};
  for (const auto& [name, description] : commands) {
    auto* sub = app.add_subcommand(name, description);
    add_common(sub);
    const std::string n = name;
    if (n == "sensitivity") {
      sub->add_option("--dominance-threshold", options.dominance_threshold,
                      "Background-dominated when n_BG exceeds this multiple of n_DC");
    } else if (n == "simulate") {
      sub->add_option("--seed", seed, "RNG seed (overrides simulation.seed)");
      sub->add_option("--duration", duration, "Virtual run time in seconds");
    } else if (n == "optimize") {
      sub->add_option("--sweep", sweep_parameter, "Scenario parameter to sweep (SI units)");
      sub->add_option("--grid", options.grid, "Comma-separated sweep values")->delimiter(',');
      sub->add_option("--powers", options.powers, "Comma-separated pump powers in W")
          ->delimiter(',');
      sub->add_option("--threads", options.threads, "Worker threads for sweeps");
    } else if (n == "compare") {
      sub->add_option("--catalog", catalog, "Detector catalog CSV");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const Command command = parse_command(sub->get_name());
    options.seed = seed;
    options.duration = duration;
    if (!catalog.empty()) options.catalog = catalog;
    if (!sweep_parameter.empty()) options.sweep_parameter = sweep_parameter;

    const auto scenario = load_scenario(resolve_scenario(config), strict);
    const auto report = run_command(command, scenario, options);
    emit_report(report, parse_format(format), std::filesystem::path(out_path));
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "mirpc: configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "mirpc: domain error: " << e.what() << "\n";
    return kDomainError;
  } catch (const IoError& e) {
    std::cerr << "mirpc: I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "mirpc: error: " << e.what() << "\n";
    return kDomainError;
  }
}
