#pragma once

// Sum-frequency up-conversion efficiency in the undepleted-pump, perfectly
// phase-matched limit, and the efficiency budget of the detection chain.

namespace mirpc {

struct CrystalSpec {
  double length;       // m
  double d_eff;        // m/V
  double attenuation;  // 1/m, summed over the three beams
  double n_sfg;        // refractive index at the sum frequency
  double temperature;  // K
};

struct PumpBeam {
  double wavelength;  // m
  double power;       // W
};

struct SignalBeam {
  double wavelength;  // m
};

/// Gaussian-beam focusing expressed by the confocal parameter b and the
/// focusing parameter xi = L / b.
struct FocusingGeometry {
  double confocal_parameter;  // m
  double xi;

  static FocusingGeometry bind(double crystal_length, double confocal_parameter);
  static FocusingGeometry from_xi(double crystal_length, double xi);
};

void validate(const CrystalSpec& crystal);
void validate(const PumpBeam& pump);
void validate(const SignalBeam& signal);
void validate(const FocusingGeometry& focusing);

/// Focusing factor with no phase mismatch and no walk-off,
/// h(xi) = arctan(xi)^2 / xi.
double boyd_kleinman_h(double xi);

struct FocusingOptimum {
  double xi_star;
  double h_star;
};

/// Maximiser of boyd_kleinman_h, located by golden-section search to 1e-9.
FocusingOptimum optimal_focusing();

struct SfgEfficiency {
  double value;  // clamped to [0, 1]
  double raw;    // unclamped formula value
  bool clamped;  // raw > 1, outside the perturbative regime
};

/// eta = 32 pi^2 d^2 P exp(-alpha L) L h / (eps0 c ls^2 lp n^2).
/// Requires h in (0, 1.1].
SfgEfficiency sfg_quantum_efficiency(const CrystalSpec& crystal, const PumpBeam& pump,
                                     const SignalBeam& signal, double h);

struct EfficiencyBudget {
  double eta_sfg;
  double eta_opt;
  double eta_det;
  double eta_tot;
};

EfficiencyBudget compose_budget(double eta_sfg, double eta_opt, double eta_det);

/// eta_tot / (eta_opt * eta_det). Throws InconsistentBudgetError when the
/// measured total exceeds what the optical and detector factors allow.
double infer_sfg_efficiency(double eta_tot, double eta_opt, double eta_det);

double per_watt_efficiency(double eta_sfg, double pump_power);

/// Ratio of theoretical to measured normalised efficiency.
double theory_gap(double theory_per_watt, double measured_per_watt);

}  // namespace mirpc
