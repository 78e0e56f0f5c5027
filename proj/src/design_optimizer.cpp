#include "mirpc/design_optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <thread>

#include "mirpc/errors.hpp"
#include "mirpc/numerics.hpp"

namespace mirpc {

using detail::require;

namespace {

constexpr std::array<std::string_view, 17> kSweepParameters{
    "crystal.length",         "crystal.d_eff",          "crystal.attenuation",
    "crystal.n_sfg",          "crystal.temperature",    "pump.wavelength",
    "pump.power",             "signal.wavelength",      "focusing.confocal_parameter",
    "focusing.xi",            "filters.bandwidth",      "environment.temperature",
    "environment.emissivity", "environment.excess_background",
    "detector.eta_det",       "detector.dark_rate",     "optics.eta_opt"};

double length_objective(double attenuation, double confocal_parameter, double length) {
  if (length <= 0.0) return 0.0;
  return std::exp(-attenuation * length) * length * boyd_kleinman_h(length / confocal_parameter);
}

}  // namespace

FocusingGeometry Scenario::focusing() const {
  return FocusingGeometry::bind(crystal.length, confocal_parameter);
}

SpectralBand Scenario::band() const {
  return SpectralBand(wavelength_to_frequency(signal.wavelength), filter_bandwidth);
}

ThermalEnvironment Scenario::thermal() const {
  ThermalEnvironment env = environment;
  if (environment_follows_crystal) env.temperature = crystal.temperature;
  return env;
}

void validate(const Scenario& s) {
  validate(s.crystal);
  validate(s.pump);
  validate(s.signal);
  validate(s.focusing());
  require(s.filter_bandwidth >= 0.0, "filters.bandwidth must be >= 0");
  (void)s.band();
  if (s.transfer) validate(TransferFunction{*s.transfer});
  validate(s.thermal());
  require(s.excess_background >= 0.0, "environment.excess_background must be >= 0");
  validate(s.detector);
  require(s.eta_opt >= 0.0 && s.eta_opt <= 1.0, "optics.eta_opt must lie in [0, 1]");
}

ScenarioEvaluation evaluate(const Scenario& s) {
  validate(s);
  ScenarioEvaluation out{};
  out.h = boyd_kleinman_h(s.focusing().xi);
  out.sfg = sfg_quantum_efficiency(s.crystal, s.pump, s.signal, out.h);
  out.budget = compose_budget(out.sfg.value, s.eta_opt, s.detector.eta_det);

  const auto env = s.thermal();
  const double thermal =
      s.transfer ? background_rate_integral(out.budget.eta_tot, TransferFunction{*s.transfer}, env)
                 : background_rate_delta(out.budget.eta_tot, s.band(), env);
  out.noise = compose_noise(s.detector.dark_rate, thermal + s.excess_background);
  out.floor = sensitivity_floor(s.signal.wavelength, s.band(), env);
  out.snr0 = out.budget.eta_tot > 0.0 ? snr0(s.signal.wavelength, out.budget.eta_tot, out.noise)
                                      : std::numeric_limits<double>::infinity();
  return out;
}

double optimal_length_fixed_focus(double attenuation) {
  require(attenuation >= 0.0, "attenuation must be non-negative");
  if (attenuation == 0.0) {
    throw NoInteriorOptimumError(
        "no interior optimum: without absorption the efficiency grows with crystal length");
  }
  return 1.0 / attenuation;
}

LengthOptimum optimal_length_joint(double attenuation, double confocal_parameter,
                                   double max_length) {
  require(attenuation >= 0.0, "attenuation must be non-negative");
  require(confocal_parameter > 0.0, "confocal parameter must be positive");
  require(max_length > 0.0 && std::isfinite(max_length), "length bound must be positive");

  const auto objective = [&](double L) {
    return length_objective(attenuation, confocal_parameter, L);
  };
  auto best = golden_section_maximize(objective, 0.0, max_length, 1e-9);

  // Heuristic starts: the absorption-only optimum and the focusing-only one.
  const FocusingOptimum focus = optimal_focusing();
  for (double start : {attenuation > 0.0 ? 1.0 / attenuation : max_length,
                       focus.xi_star * confocal_parameter}) {
    if (start > 0.0 && start <= max_length && objective(start) > best.value) {
      best = {start, objective(start)};
    }
  }
  const bool interior = max_length - best.x > 1e-9;
  return {best.x, best.value, interior};
}

std::span<const std::string_view> sweep_parameters() { return kSweepParameters; }

void set_parameter(Scenario& s, std::string_view path, double value) {
  if (path == "crystal.length") {
    s.crystal.length = value;
  } else if (path == "crystal.d_eff") {
    s.crystal.d_eff = value;
  } else if (path == "crystal.attenuation") {
    s.crystal.attenuation = value;
  } else if (path == "crystal.n_sfg") {
    s.crystal.n_sfg = value;
  } else if (path == "crystal.temperature") {
    s.crystal.temperature = value;
  } else if (path == "pump.wavelength") {
    s.pump.wavelength = value;
  } else if (path == "pump.power") {
    s.pump.power = value;
  } else if (path == "signal.wavelength") {
    s.signal.wavelength = value;
  } else if (path == "focusing.confocal_parameter") {
    s.confocal_parameter = value;
  } else if (path == "focusing.xi") {
    require(value > 0.0, "focusing.xi must be > 0");
    s.confocal_parameter = s.crystal.length / value;
  } else if (path == "filters.bandwidth") {
    s.filter_bandwidth = value;
  } else if (path == "environment.temperature") {
    s.environment.temperature = value;
    s.environment_follows_crystal = false;
  } else if (path == "environment.emissivity") {
    s.environment.emissivity = value;
  } else if (path == "environment.excess_background") {
    s.excess_background = value;
  } else if (path == "detector.eta_det") {
    s.detector.eta_det = value;
  } else if (path == "detector.dark_rate") {
    s.detector.dark_rate = value;
  } else if (path == "optics.eta_opt") {
    s.eta_opt = value;
  } else {
    std::string known;
    for (auto name : sweep_parameters()) known += (known.empty() ? "" : ", ") + std::string(name);
    throw ConfigError("unknown sweep parameter '" + std::string(path) + "' (known: " + known + ")");
  }
}

SweepResult sweep(const Scenario& s, std::string_view parameter, std::span<const double> grid,
                  unsigned threads) {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  {
    Scenario probe = s;
    set_parameter(probe, parameter, grid.front());
  }

  SweepResult result{std::string(parameter), std::vector<SweepRow>(grid.size())};
  std::vector<std::exception_ptr> errors(grid.size());
  const auto run_point = [&](std::size_t i) {
    try {
      Scenario point = s;
      set_parameter(point, parameter, grid[i]);
      const auto ev = evaluate(point);
      result.rows[i] = {grid[i],           ev.sfg.value,  ev.budget.eta_tot,
                        ev.noise.background_rate, ev.snr0, ev.sfg.clamped};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, grid.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) run_point(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < grid.size(); i += workers) run_point(i);
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return result;
}

std::vector<TradeoffPoint> pump_power_tradeoff(const Scenario& s, std::span<const double> powers) {
  require(!powers.empty(), "power grid is empty");
  std::vector<TradeoffPoint> curve;
  curve.reserve(powers.size());
  for (double p : powers) {
    require(p > 0.0, "pump powers must be positive");
    Scenario point = s;
    point.pump.power = p;
    const auto ev = evaluate(point);
    curve.push_back({p, ev.budget.eta_tot, ev.snr0, ev.floor, ev.sfg.clamped});
  }
  return curve;
}

}  // namespace mirpc
