#pragma once

// Full-chain evaluation of a detector design (up-conversion -> thermal
// background -> sensitivity), 1-D design optimisation, and parameter sweeps.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mirpc/radiometry.hpp"
#include "mirpc/sensitivity.hpp"
#include "mirpc/upconversion.hpp"

namespace mirpc {

/// A detector design. The focusing is stored as the confocal parameter,
/// held fixed when the crystal length changes. The blackbody emitter sits at
/// the crystal temperature unless `environment_follows_crystal` is false.
struct Scenario {
  CrystalSpec crystal;
  PumpBeam pump;
  SignalBeam signal;
  double confocal_parameter;  // m
  double filter_bandwidth;    // Hz, acceptance width referred to the signal band
  std::optional<TabulatedTransfer> transfer;  // replaces the rectangular filter if set
  ThermalEnvironment environment;
  bool environment_follows_crystal = true;
  double excess_background = 0.0;  // Hz, e.g. residual pump leakage
  DetectorSpec detector;
  double eta_opt;

  FocusingGeometry focusing() const;
  SpectralBand band() const;
  ThermalEnvironment thermal() const;
};

void validate(const Scenario& s);

struct ScenarioEvaluation {
  double h;
  SfgEfficiency sfg;
  EfficiencyBudget budget;
  NoiseBudget noise;
  double snr0;   // W
  double floor;  // W
};

ScenarioEvaluation evaluate(const Scenario& s);

/// L* = 1 / alpha, the maximiser of exp(-alpha L) L at fixed focusing factor.
double optimal_length_fixed_focus(double attenuation);

struct LengthOptimum {
  double length;     // m
  double objective;  // exp(-alpha L) L h(L / b)
  bool interior;     // false when the search ends on the L_max boundary
};

inline constexpr double kDefaultMaxLength = 0.10;  // m

/// Maximises exp(-alpha L) L h(L / b) over L in (0, max_length] with
/// golden-section search to 1e-9 m.
LengthOptimum optimal_length_joint(double attenuation, double confocal_parameter,
                                   double max_length = kDefaultMaxLength);

struct SweepRow {
  double value;
  double eta_sfg;
  double eta_tot;
  double n_bg;   // Hz
  double snr0;   // W
  bool clamped;
};

struct SweepResult {
  std::string parameter;
  std::vector<SweepRow> rows;
};

/// Parameter paths accepted by `sweep`, in SI units.
std::span<const std::string_view> sweep_parameters();

/// Sets a named numeric field; throws ConfigError for unknown paths.
void set_parameter(Scenario& s, std::string_view path, double value);

/// Evaluates the scenario at each grid value of `parameter`. Points run on
/// up to `threads` workers; rows always follow grid order.
SweepResult sweep(const Scenario& s, std::string_view parameter, std::span<const double> grid,
                  unsigned threads = 1);

struct TradeoffPoint {
  double power;    // W
  double eta_tot;
  double snr0;     // W
  double floor;    // W
  bool clamped;
};

std::vector<TradeoffPoint> pump_power_tradeoff(const Scenario& s, std::span<const double> powers);

}  // namespace mirpc
