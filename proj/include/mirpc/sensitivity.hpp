#pragma once

// Detection sensitivity: the optical power giving unit signal-to-noise
// ratio, its background-limited floor, and ranking against other detectors.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mirpc/quantities.hpp"
#include "mirpc/radiometry.hpp"

namespace mirpc {

struct DetectorSpec {
  double eta_det;      // probability
  double dark_rate;    // Hz
  double jitter_fwhm;  // s
  double dead_time;    // s
};

void validate(const DetectorSpec& det);

struct DetectorCatalogEntry {
  std::string name;
  double timing;  // s
  double snr0;    // W
  std::string note;
};

/// Catalog CSV with columns name,timing_ns,snr0_pw,note.
std::vector<DetectorCatalogEntry> read_catalog_csv(std::istream& in);
std::vector<DetectorCatalogEntry> read_catalog_csv(const std::filesystem::path& path);

/// (h c / (lambda eta_tot)) * <n_tot>, in watts.
double snr0(double signal_lambda, double eta_tot, const NoiseBudget& noise);

/// (h c / lambda) * dnu * occupation(nu0): the limit of snr0 once dark
/// counts are negligible next to thermal background.
double sensitivity_floor(double signal_lambda, const SpectralBand& band,
                         const ThermalEnvironment& env);

struct SensitivityPoint {
  double eta_tot;
  double snr0;  // W
};

/// snr0 with <n_tot> = dark_rate + background_rate_delta(eta, band, env) at
/// each efficiency in `eta_grid`.
std::vector<SensitivityPoint> snr0_vs_efficiency(double signal_lambda, double dark_rate,
                                                 const SpectralBand& band,
                                                 const ThermalEnvironment& env,
                                                 std::span<const double> eta_grid);

struct SensitivityReport {
  double snr0;   // W
  double floor;  // W
  bool background_dominated;
  double signal_lambda;
  double eta_tot;
  NoiseBudget noise;
};

/// background_dominated is set when n_BG > threshold * n_DC.
SensitivityReport assess_sensitivity(double signal_lambda, double eta_tot,
                                     const NoiseBudget& noise, const SpectralBand& band,
                                     const ThermalEnvironment& env,
                                     double dominance_threshold = 10.0);

struct DetectorFigure {
  double timing;  // s
  double snr0;    // W
};

struct ComparisonRow {
  DetectorCatalogEntry entry;
  double ratio;  // entry.snr0 / ours.snr0
};

/// Catalog sorted by snr0 ascending (stable), each with its sensitivity
/// ratio relative to `ours`.
std::vector<ComparisonRow> compare_detectors(const DetectorFigure& ours,
                                             std::span<const DetectorCatalogEntry> catalog);

}  // namespace mirpc
