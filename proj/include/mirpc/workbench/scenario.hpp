#pragma once

// Scenario files: TOML documents describing a detector design, optional
// measured values, and Monte Carlo / TAC settings. Values are given in
// laboratory units named by the key suffix (length_mm, power_mw, ...) and
// converted to SI on load.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mirpc/counting_sim.hpp"
#include "mirpc/design_optimizer.hpp"

namespace mirpc::workbench {

/// Values observed on a real setup, used alongside the model.
struct MeasuredData {
  std::optional<double> eta_tot;
  std::optional<double> total_noise;     // Hz
  std::optional<double> reference_snr0;  // W, a previously reported figure
};

struct SimulationSettings {
  PulseTrainSpec pulses;
  std::optional<std::uint64_t> seed;
  double duration;  // s
  bool include_noise = true;
};

struct ScenarioFile {
  std::string name;
  std::filesystem::path source;
  Scenario scenario;
  MeasuredData measured;
  SimulationSettings simulation;
  TacConfig tac;
  std::string transfer_function_csv;  // as written in the file, empty if none
  std::vector<std::string> warnings;  // e.g. unknown keys in lenient mode
  nlohmann::ordered_json resolved;    // every input as used, in file units
};

/// Accepts a path, or the name of a bundled scenario ("paper_25C").
std::filesystem::path resolve_scenario(std::string_view name_or_path);

/// Directory holding bundled scenarios and the detector catalog. Honours the
/// MIRPC_DATA_DIR environment variable.
std::filesystem::path data_dir();

/// Throws ConfigError (parse failures, unknown keys in strict mode, or a
/// constraint violation naming the offending field) or IoError.
ScenarioFile load_scenario(const std::filesystem::path& path, bool strict = false);

ScenarioFile parse_scenario(std::string_view toml_text, bool strict = false,
                            const std::filesystem::path& source = {});

/// Fully resolved inputs in the file's own key names and units.
nlohmann::ordered_json echo(const ScenarioFile& file);

/// TOML text that loads back to the same resolved scenario.
std::string to_toml(const ScenarioFile& file);

}  // namespace mirpc::workbench
