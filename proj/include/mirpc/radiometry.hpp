#pragma once

// Thermal background model: Bose-Einstein occupation of a single spatial
// mode, filtered by the optical transfer function and scaled by the overall
// detection efficiency.

#include <filesystem>
#include <iosfwd>
#include <variant>
#include <vector>

#include "mirpc/quantities.hpp"

namespace mirpc {

struct ThermalEnvironment {
  double temperature;        // K
  double emissivity = 1.0;   // [0, 1]
};

void validate(const ThermalEnvironment& env);

/// Rectangular filter of height `peak` over `band`.
struct DeltaTransfer {
  SpectralBand band;
  double peak = 1.0;
};

/// Transmission sampled on a strictly increasing frequency grid, linearly
/// interpolated between samples and zero outside.
struct TabulatedTransfer {
  std::vector<double> frequency;     // Hz
  std::vector<double> transmission;  // [0, 1]
};

using TransferFunction = std::variant<DeltaTransfer, TabulatedTransfer>;

void validate(const TransferFunction& tf);

/// Two-column CSV (frequency_hz, transmission) with a header row.
TabulatedTransfer read_transfer_function_csv(std::istream& in);
TabulatedTransfer read_transfer_function_csv(const std::filesystem::path& path);

struct NoiseBudget {
  double dark_rate;        // Hz
  double background_rate;  // Hz
  double total_rate;       // Hz
};

/// Mean photon number per mode, emissivity / (exp(h nu / k T) - 1).
/// Returns exactly 0 once h nu / k T exceeds 700.
double mean_thermal_occupation(double frequency, const ThermalEnvironment& env);

/// eta_tot * dnu * occupation(nu0): the narrow-band approximation.
double background_rate_delta(double eta_tot, const SpectralBand& band,
                             const ThermalEnvironment& env);

/// eta_tot * integral T(nu) occupation(nu) dnu. Tabulated transfer functions
/// use the trapezoid rule on their own grid; rectangular bands use adaptive
/// Gauss-Kronrod quadrature.
double background_rate_integral(double eta_tot, const TransferFunction& tf,
                                const ThermalEnvironment& env);

NoiseBudget compose_noise(double dark_rate, double background_rate);

}  // namespace mirpc
