#include "mirpc/workbench/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "mirpc/errors.hpp"
#include "mirpc/quantities.hpp"

namespace mirpc::workbench {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Laboratory defaults: PPLN up-converter pumped at 980 nm, 4.65 um signal,
// Si APD, crystal at 25 C.
constexpr double kDefaultLengthMm = 10.0;
constexpr double kDefaultDeffPmPerV = 16.0;
constexpr double kDefaultAbsorption = 0.40;  // fraction lost over the crystal
constexpr double kDefaultNsfg = 2.17;
constexpr double kDefaultTemperatureC = 25.0;
constexpr double kDefaultPumpNm = 980.0;
constexpr double kDefaultPumpMw = 63.0;
constexpr double kDefaultSignalUm = 4.65;
constexpr double kDefaultFilterNm = 0.35;
constexpr double kDefaultFilterCenterNm = 810.0;
constexpr double kDefaultEtaDet = 0.52;
constexpr double kDefaultDarkHz = 55.0;
constexpr double kDefaultJitterNs = 0.3;
constexpr double kDefaultEtaOpt = 0.137;
constexpr double kDefaultRepRateKhz = 750.0;
constexpr double kDefaultPulseNs = 1.0;
constexpr double kDefaultDurationS = 300.0;
constexpr double kDefaultBinNs = 0.02;

const std::set<std::string> kSections{"crystal",  "pump",   "signal",   "focusing",
                                      "filters",  "environment", "detector", "optics",
                                      "measured", "simulation",  "tac"};

class Section {
public:
  Section(const toml::table& root, std::string name)
      : name_(std::move(name)), out_(ordered_json::object()) {
    if (const auto* node = root.get(name_)) {
      table_ = node->as_table();
      if (!table_) throw ConfigError(name_ + ": expected a table");
    }
  }

  bool has(std::string_view key) const { return table_ && table_->contains(key); }

  std::optional<double> number(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    const auto v = (*table_)[key].value<double>();
    if (!v || !std::isfinite(*v)) throw ConfigError(path(key) + ": expected a finite number");
    out_[key] = *v;
    return v;
  }

  double number(const std::string& key, double fallback) {
    const auto v = number(key);
    if (!v) out_[key] = fallback;
    return v.value_or(fallback);
  }

  std::optional<std::string> text(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    const auto v = (*table_)[key].value<std::string>();
    if (!v) throw ConfigError(path(key) + ": expected a string");
    out_[key] = *v;
    return v;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const auto v = text(key);
    if (!v) out_[key] = fallback;
    return v.value_or(fallback);
  }

  bool flag(const std::string& key, bool fallback) {
    seen_.insert(key);
    bool v = fallback;
    if (has(key)) {
      const auto b = (*table_)[key].value<bool>();
      if (!b) throw ConfigError(path(key) + ": expected true or false");
      v = *b;
    }
    out_[key] = v;
    return v;
  }

  std::optional<std::uint64_t> unsigned_integer(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    const auto* node = (*table_)[key].as_integer();
    if (!node || node->get() < 0) throw ConfigError(path(key) + ": expected a non-negative integer");
    const auto v = static_cast<std::uint64_t>(node->get());
    out_[key] = v;
    return v;
  }

  std::optional<std::pair<double, double>> pair(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    const auto* arr = (*table_)[key].as_array();
    if (!arr || arr->size() != 2) throw ConfigError(path(key) + ": expected [min, max]");
    const auto lo = (*arr)[0].value<double>();
    const auto hi = (*arr)[1].value<double>();
    if (!lo || !hi) throw ConfigError(path(key) + ": expected two numbers");
    out_[key] = {*lo, *hi};
    return std::make_pair(*lo, *hi);
  }

  void record_pair(const std::string& key, std::pair<double, double> value) {
    out_[key] = {value.first, value.second};
  }

  // Rejects (strict) or reports unknown keys, then stores the resolved values.
  void finish(bool strict, std::vector<std::string>& warnings, ordered_json& resolved) const {
    resolved[name_] = out_;
    if (!table_) return;
    for (const auto& [k, v] : *table_) {
      const std::string key(k.str());
      if (seen_.count(key)) continue;
      const std::string msg = "unknown key '" + path(key) + "'";
      if (strict) throw ConfigError(msg);
      warnings.push_back(msg);
    }
  }

  std::string path(std::string_view key) const { return name_ + "." + std::string(key); }

private:
  std::string name_;
  const toml::table* table_ = nullptr;
  ordered_json out_;
  std::set<std::string> seen_;
};

// Runs a validation and rewraps DomainError as a ConfigError naming `field`.
template <typename F>
void check(const std::string& field, F&& fn) {
  try {
    fn();
  } catch (const DomainError& e) {
    throw ConfigError(field + ": " + e.what());
  }
}

void require_field(bool ok, const std::string& field, const std::string& constraint, double got) {
  if (ok) return;
  std::ostringstream msg;
  msg << field << ": must be " << constraint << " (got " << got << ")";
  throw ConfigError(msg.str());
}

PulseShape parse_shape(const std::string& s) {
  if (s == "rectangular") return PulseShape::rectangular;
  if (s == "gaussian") return PulseShape::gaussian;
  throw ConfigError("simulation.pulse_shape: expected \"rectangular\" or \"gaussian\"");
}

PhotonStatistics parse_statistics(const std::string& s) {
  if (s == "poissonian") return PhotonStatistics::poissonian;
  if (s == "thermal") return PhotonStatistics::thermal;
  throw ConfigError("simulation.statistics: expected \"poissonian\" or \"thermal\"");
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

fs::path data_dir() {
  if (const char* env = std::getenv("MIRPC_DATA_DIR"); env && *env) return fs::path(env);
#ifdef MIRPC_DATA_DIR
  return fs::path(MIRPC_DATA_DIR);
#else
  return fs::path("data");
#endif
}

fs::path resolve_scenario(std::string_view name_or_path) {
  const fs::path p(name_or_path);
  if (fs::exists(p)) return p;
  const fs::path bundled = data_dir() / "scenarios" / (std::string(name_or_path) + ".toml");
  if (p.extension().empty() && fs::exists(bundled)) return bundled;
  throw IoError("scenario '" + std::string(name_or_path) + "' not found");
}

ScenarioFile load_scenario(const fs::path& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), strict, path);
}

ScenarioFile parse_scenario(std::string_view toml_text, bool strict, const fs::path& source) {
  if (toml_text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ConfigError("scenario " + source.string() + " is empty");
  }
  toml::table root;
  try {
    root = toml::parse(toml_text, source.string());
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "parse error in " << source.string() << " at line " << e.source().begin.line << ": "
        << e.description();
    throw ConfigError(msg.str());
  }

  ScenarioFile file;
  file.source = source;
  ordered_json& r = file.resolved;
  r = ordered_json::object();

  for (const auto& [k, v] : root) {
    const std::string key(k.str());
    if (key == "name") continue;
    if (!kSections.count(key)) {
      const std::string msg = "unknown key '" + key + "'";
      if (strict) throw ConfigError(msg);
      file.warnings.push_back(msg);
    }
  }
  if (const auto* n = root.get("name")) {
    const auto v = n->value<std::string>();
    if (!v) throw ConfigError("name: expected a string");
    file.name = *v;
  } else {
    file.name = source.stem().string();
  }
  r["name"] = file.name;

  Scenario& s = file.scenario;

  // crystal
  Section crystal(root, "crystal");
  const double length_mm = crystal.number("length_mm", kDefaultLengthMm);
  require_field(length_mm > 0.0, "crystal.length_mm", "> 0", length_mm);
  s.crystal.length = length_mm * 1e-3;
  const double deff = crystal.number("d_eff_pm_per_v", kDefaultDeffPmPerV);
  require_field(deff > 0.0, "crystal.d_eff_pm_per_v", "> 0", deff);
  s.crystal.d_eff = deff * 1e-12;
  if (crystal.has("attenuation_per_m") && crystal.has("absorption")) {
    throw ConfigError("crystal: give either attenuation_per_m or absorption, not both");
  }
  if (crystal.has("attenuation_per_m")) {
    const double alpha = *crystal.number("attenuation_per_m");
    require_field(alpha >= 0.0, "crystal.attenuation_per_m", ">= 0", alpha);
    s.crystal.attenuation = alpha;
    crystal.number("absorption");
  } else {
    const double loss = crystal.number("absorption", kDefaultAbsorption);
    require_field(loss >= 0.0 && loss < 1.0, "crystal.absorption", "in [0, 1)", loss);
    s.crystal.attenuation = -std::log1p(-loss) / s.crystal.length;
  }
  s.crystal.n_sfg = crystal.number("n_sfg", kDefaultNsfg);
  require_field(s.crystal.n_sfg >= 1.0, "crystal.n_sfg", ">= 1", s.crystal.n_sfg);
  const double temp_c = crystal.number("temperature_c", kDefaultTemperatureC);
  check("crystal.temperature_c", [&] { s.crystal.temperature = celsius_to_kelvin(temp_c); });
  require_field(s.crystal.temperature > 0.0, "crystal.temperature_c", "> -273.15", temp_c);
  crystal.finish(strict, file.warnings, r);

  // pump
  Section pump(root, "pump");
  const double pump_nm = pump.number("wavelength_nm", kDefaultPumpNm);
  require_field(pump_nm > 0.0, "pump.wavelength_nm", "> 0", pump_nm);
  const double pump_mw = pump.number("power_mw", kDefaultPumpMw);
  require_field(pump_mw >= 0.0, "pump.power", ">= 0 mW", pump_mw);
  s.pump = {pump_nm * 1e-9, pump_mw * 1e-3};
  pump.finish(strict, file.warnings, r);

  // signal
  Section signal(root, "signal");
  const double signal_um = signal.number("wavelength_um", kDefaultSignalUm);
  require_field(signal_um > 0.0, "signal.wavelength_um", "> 0", signal_um);
  s.signal = {signal_um * 1e-6};
  signal.finish(strict, file.warnings, r);

  // focusing: confocal parameter, or xi = L / b, or optimal focusing
  Section focusing(root, "focusing");
  if (focusing.has("confocal_parameter_mm") && focusing.has("xi")) {
    throw ConfigError("focusing: give either confocal_parameter_mm or xi, not both");
  }
  if (focusing.has("confocal_parameter_mm")) {
    const double b_mm = *focusing.number("confocal_parameter_mm");
    require_field(b_mm > 0.0, "focusing.confocal_parameter_mm", "> 0", b_mm);
    s.confocal_parameter = b_mm * 1e-3;
    focusing.number("xi");
  } else {
    const double xi = focusing.number("xi", optimal_focusing().xi_star);
    require_field(xi > 0.0, "focusing.xi", "> 0", xi);
    s.confocal_parameter = s.crystal.length / xi;
    focusing.number("confocal_parameter_mm");
  }
  focusing.finish(strict, file.warnings, r);

  // filters: acceptance bandwidth, given in the up-converted band
  Section filters(root, "filters");
  if (filters.has("bandwidth_ghz") && filters.has("bandwidth_nm")) {
    throw ConfigError("filters: give either bandwidth_ghz or bandwidth_nm, not both");
  }
  if (filters.has("bandwidth_ghz")) {
    const double ghz = *filters.number("bandwidth_ghz");
    require_field(ghz >= 0.0, "filters.bandwidth_ghz", ">= 0", ghz);
    s.filter_bandwidth = ghz * 1e9;
    filters.number("bandwidth_nm");
    filters.number("center_nm");
  } else {
    const double bw_nm = filters.number("bandwidth_nm", kDefaultFilterNm);
    const double center_nm = filters.number("center_nm", kDefaultFilterCenterNm);
    require_field(bw_nm >= 0.0, "filters.bandwidth_nm", ">= 0", bw_nm);
    require_field(center_nm > 0.0, "filters.center_nm", "> 0", center_nm);
    s.filter_bandwidth = bandwidth_wavelength_to_frequency(bw_nm * 1e-9, center_nm * 1e-9);
  }
  if (auto csv = filters.text("transfer_function_csv")) {
    file.transfer_function_csv = *csv;
    fs::path p(*csv);
    if (p.is_relative() && !source.empty()) p = source.parent_path() / p;
    s.transfer = read_transfer_function_csv(p);
  }
  filters.finish(strict, file.warnings, r);

  // environment
  Section environment(root, "environment");
  s.environment.emissivity = environment.number("emissivity", 1.0);
  require_field(s.environment.emissivity >= 0.0 && s.environment.emissivity <= 1.0,
                "environment.emissivity", "in [0, 1]", s.environment.emissivity);
  s.excess_background = environment.number("excess_background_hz", 0.0);
  require_field(s.excess_background >= 0.0, "environment.excess_background_hz", ">= 0",
                s.excess_background);
  if (auto t = environment.number("temperature_c")) {
    check("environment.temperature_c", [&] { s.environment.temperature = celsius_to_kelvin(*t); });
    require_field(s.environment.temperature > 0.0, "environment.temperature_c", "> -273.15", *t);
    s.environment_follows_crystal = false;
  } else {
    s.environment.temperature = s.crystal.temperature;
    s.environment_follows_crystal = true;
  }
  environment.finish(strict, file.warnings, r);

  // detector
  Section detector(root, "detector");
  s.detector.eta_det = detector.number("eta_det", kDefaultEtaDet);
  require_field(s.detector.eta_det >= 0.0 && s.detector.eta_det <= 1.0, "detector.eta_det",
                "in [0, 1]", s.detector.eta_det);
  s.detector.dark_rate = detector.number("dark_rate_hz", kDefaultDarkHz);
  require_field(s.detector.dark_rate >= 0.0, "detector.dark_rate_hz", ">= 0", s.detector.dark_rate);
  const double jitter_ns = detector.number("jitter_fwhm_ns", kDefaultJitterNs);
  require_field(jitter_ns >= 0.0, "detector.jitter_fwhm_ns", ">= 0", jitter_ns);
  s.detector.jitter_fwhm = jitter_ns * 1e-9;
  const double dead_ns = detector.number("dead_time_ns", 0.0);
  require_field(dead_ns >= 0.0, "detector.dead_time_ns", ">= 0", dead_ns);
  s.detector.dead_time = dead_ns * 1e-9;
  detector.finish(strict, file.warnings, r);

  // optics
  Section optics(root, "optics");
  s.eta_opt = optics.number("eta_opt", kDefaultEtaOpt);
  require_field(s.eta_opt >= 0.0 && s.eta_opt <= 1.0, "optics.eta_opt", "in [0, 1]", s.eta_opt);
  optics.finish(strict, file.warnings, r);

  // measured (no defaults)
  Section measured(root, "measured");
  file.measured.eta_tot = measured.number("eta_tot");
  if (file.measured.eta_tot) {
    require_field(*file.measured.eta_tot > 0.0 && *file.measured.eta_tot <= 1.0,
                  "measured.eta_tot", "in (0, 1]", *file.measured.eta_tot);
  }
  file.measured.total_noise = measured.number("total_noise_hz");
  if (file.measured.total_noise) {
    require_field(*file.measured.total_noise >= 0.0, "measured.total_noise_hz", ">= 0",
                  *file.measured.total_noise);
  }
  if (auto pw = measured.number("reference_snr0_pw")) {
    require_field(*pw > 0.0, "measured.reference_snr0_pw", "> 0", *pw);
    file.measured.reference_snr0 = *pw * 1e-12;
  }
  measured.finish(strict, file.warnings, r);

  // simulation
  Section sim(root, "simulation");
  auto& pulses = file.simulation.pulses;
  const double rep_khz = sim.number("rep_rate_khz", kDefaultRepRateKhz);
  require_field(rep_khz > 0.0, "simulation.rep_rate_khz", "> 0", rep_khz);
  pulses.rep_rate = rep_khz * 1e3;
  const double width_ns = sim.number("pulse_width_ns", kDefaultPulseNs);
  pulses.pulse_width = width_ns * 1e-9;
  require_field(pulses.pulse_width > 0.0 && pulses.pulse_width < 1.0 / pulses.rep_rate,
                "simulation.pulse_width_ns", "in (0, 1 / rep_rate)", width_ns);
  pulses.mean_photons = sim.number("mean_photons", 1.0);
  require_field(pulses.mean_photons >= 0.0, "simulation.mean_photons", ">= 0",
                pulses.mean_photons);
  pulses.shape = parse_shape(sim.text("pulse_shape", "rectangular"));
  pulses.statistics = parse_statistics(sim.text("statistics", "poissonian"));
  file.simulation.seed = sim.unsigned_integer("seed");
  file.simulation.duration = sim.number("duration_s", kDefaultDurationS);
  require_field(file.simulation.duration > 0.0, "simulation.duration_s", "> 0",
                file.simulation.duration);
  file.simulation.include_noise = sim.flag("include_noise", true);
  sim.finish(strict, file.warnings, r);

  // tac: default window covers the delay of a pulse to the following sync
  Section tac(root, "tac");
  const double bin_ns = tac.number("bin_width_ns", kDefaultBinNs);
  require_field(bin_ns > 0.0, "tac.bin_width_ns", "> 0", bin_ns);
  std::pair<double, double> window_ns;
  if (auto w = tac.pair("window_ns")) {
    window_ns = *w;
  } else {
    const double period_ns = 1e9 / pulses.rep_rate;
    window_ns = {std::floor(period_ns - width_ns) - 2.0, std::ceil(period_ns) + 1.0};
    tac.record_pair("window_ns", window_ns);
  }
  file.tac = {bin_ns * 1e-9, window_ns.first * 1e-9, window_ns.second * 1e-9};
  check("tac", [&] { validate(file.tac); });
  tac.finish(strict, file.warnings, r);

  check("scenario", [&] { validate(s); });
  return file;
}

nlohmann::ordered_json echo(const ScenarioFile& file) { return file.resolved; }

std::string to_toml(const ScenarioFile& file) {
  std::ostringstream out;
  out << "name = " << nlohmann::json(file.name).dump() << "\n";
  for (const auto& [section, body] : file.resolved.items()) {
    if (!body.is_object()) continue;
    out << "\n[" << section << "]\n";
    for (const auto& [key, value] : body.items()) {
      out << key << " = ";
      if (value.is_boolean()) {
        out << (value.get<bool>() ? "true" : "false");
      } else if (value.is_number_unsigned() || value.is_number_integer()) {
        out << value.dump();
      } else if (value.is_number()) {
        out << format_number(value.get<double>());
      } else if (value.is_array()) {
        out << "[" << format_number(value[0].get<double>()) << ", "
            << format_number(value[1].get<double>()) << "]";
      } else {
        out << value.dump();
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace mirpc::workbench
