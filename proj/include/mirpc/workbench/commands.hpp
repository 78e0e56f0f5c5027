#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mirpc/workbench/report.hpp"
#include "mirpc/workbench/scenario.hpp"

namespace mirpc::workbench {

enum class Command { efficiency, noise, sensitivity, simulate, optimize, compare };

Command parse_command(std::string_view name);
std::string_view command_name(Command command);

struct CommandOptions {
  std::optional<std::uint64_t> seed;      // overrides simulation.seed
  std::optional<double> duration;         // s, overrides simulation.duration_s
  std::optional<std::filesystem::path> catalog;
  std::optional<std::string> sweep_parameter;
  std::vector<double> grid;               // SI units of the swept parameter
  std::vector<double> powers;             // W, pump-power trade-off grid
  unsigned threads = 1;
  double dominance_threshold = 10.0;      // background_dominated when n_BG > k * n_DC
};

/// Runs one command. Domain failures propagate as DomainError, configuration
/// problems as ConfigError.
Report run_command(Command command, const ScenarioFile& scenario, const CommandOptions& options);

/// Default detector catalog shipped in the data directory.
std::filesystem::path default_catalog_path();

}  // namespace mirpc::workbench
