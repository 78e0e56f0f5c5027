#include "mirpc/upconversion.hpp"

#include <cmath>
#include <numbers>

#include "mirpc/errors.hpp"
#include "mirpc/numerics.hpp"
#include "mirpc/quantities.hpp"

namespace mirpc {

using detail::require;

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

FocusingGeometry FocusingGeometry::bind(double crystal_length, double confocal_parameter) {
  require(crystal_length > 0.0, "crystal length must be positive");
  require(confocal_parameter > 0.0, "confocal parameter must be positive");
  return {confocal_parameter, crystal_length / confocal_parameter};
}

FocusingGeometry FocusingGeometry::from_xi(double crystal_length, double xi) {
  require(crystal_length > 0.0, "crystal length must be positive");
  require(xi > 0.0, "focusing parameter xi must be positive");
  return {crystal_length / xi, xi};
}

void validate(const CrystalSpec& c) {
  require(c.length > 0.0, "crystal.length must be > 0");
  require(c.d_eff > 0.0, "crystal.d_eff must be > 0");
  require(c.attenuation >= 0.0, "crystal.attenuation must be >= 0");
  require(c.n_sfg >= 1.0, "crystal.n_sfg must be >= 1");
  require(c.temperature > 0.0, "crystal.temperature must be > 0 K");
}

void validate(const PumpBeam& p) {
  require(p.wavelength > 0.0, "pump.wavelength must be > 0");
  require(p.power >= 0.0, "pump.power must be >= 0");
}

void validate(const SignalBeam& s) {
  require(s.wavelength > 0.0, "signal.wavelength must be > 0");
}

void validate(const FocusingGeometry& f) {
  require(f.confocal_parameter > 0.0, "focusing.confocal_parameter must be > 0");
  require(f.xi > 0.0, "focusing.xi must be > 0");
}

double boyd_kleinman_h(double xi) {
  require(xi > 0.0, "focusing parameter xi must be positive");
  if (std::isinf(xi)) return 0.0;
  const double a = std::atan(xi);
  return a * a / xi;
}

FocusingOptimum optimal_focusing() {
  // h is unimodal with its peak near xi = 1.39; [0.1, 10] brackets it.
  const auto best = golden_section_maximize(boyd_kleinman_h, 0.1, 10.0, 1e-9);
  return {best.x, best.value};
}

SfgEfficiency sfg_quantum_efficiency(const CrystalSpec& crystal, const PumpBeam& pump,
                                     const SignalBeam& signal, double h) {
  validate(crystal);
  validate(pump);
  validate(signal);
  require(h > 0.0 && h <= 1.1, "focusing factor h must lie in (0, 1.1]");

  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  const double numerator = 32.0 * pi2 * crystal.d_eff * crystal.d_eff * pump.power *
                           std::exp(-crystal.attenuation * crystal.length) * crystal.length * h;
  const double denominator = constants::vacuum_permittivity * constants::light_speed *
                             signal.wavelength * signal.wavelength * pump.wavelength *
                             crystal.n_sfg * crystal.n_sfg;
  const double raw = numerator / denominator;
  if (raw > 1.0) return {1.0, raw, true};
  return {raw, raw, false};
}

EfficiencyBudget compose_budget(double eta_sfg, double eta_opt, double eta_det) {
  require(is_probability(eta_sfg), "eta_sfg must lie in [0, 1]");
  require(is_probability(eta_opt), "eta_opt must lie in [0, 1]");
  require(is_probability(eta_det), "eta_det must lie in [0, 1]");
  return {eta_sfg, eta_opt, eta_det, eta_sfg * eta_opt * eta_det};
}

double infer_sfg_efficiency(double eta_tot, double eta_opt, double eta_det) {
  require(eta_opt > 0.0 && eta_opt <= 1.0, "eta_opt must lie in (0, 1]");
  require(eta_det > 0.0 && eta_det <= 1.0, "eta_det must lie in (0, 1]");
  require(is_probability(eta_tot), "eta_tot must lie in [0, 1]");
  const double eta_sfg = eta_tot / (eta_opt * eta_det);
  if (eta_sfg > 1.0) {
    throw InconsistentBudgetError("eta_tot exceeds eta_opt * eta_det; inferred eta_sfg > 1");
  }
  return eta_sfg;
}

double per_watt_efficiency(double eta_sfg, double pump_power) {
  require(pump_power > 0.0, "pump power must be positive");
  require(eta_sfg >= 0.0, "eta_sfg must be non-negative");
  return eta_sfg / pump_power;
}

double theory_gap(double theory_per_watt, double measured_per_watt) {
  require(measured_per_watt > 0.0, "measured efficiency must be positive");
  require(theory_per_watt > 0.0, "theoretical efficiency must be positive");
  return theory_per_watt / measured_per_watt;
}

}  // namespace mirpc
