#include "mirpc/sensitivity.hpp"

#include <algorithm>
#include <fstream>

#include "mirpc/csv.hpp"
#include "mirpc/errors.hpp"

namespace mirpc {

using detail::require;

void validate(const DetectorSpec& det) {
  require(det.eta_det >= 0.0 && det.eta_det <= 1.0, "detector.eta_det must lie in [0, 1]");
  require(det.dark_rate >= 0.0, "detector.dark_rate must be >= 0");
  require(det.jitter_fwhm >= 0.0, "detector.jitter_fwhm must be >= 0");
  require(det.dead_time >= 0.0, "detector.dead_time must be >= 0");
}

std::vector<DetectorCatalogEntry> read_catalog_csv(std::istream& in) {
  const auto doc = csv::read(in);
  const csv::Row expected{"name", "timing_ns", "snr0_pw", "note"};
  if (doc.header != expected) {
    throw ConfigError("detector catalog header must be name,timing_ns,snr0_pw,note");
  }
  std::vector<DetectorCatalogEntry> out;
  for (const auto& row : doc.rows) {
    if (row.size() != 4) throw ConfigError("detector catalog row must have four fields");
    DetectorCatalogEntry e{row[0], csv::parse_double(row[1], "timing_ns") * 1e-9,
                           csv::parse_double(row[2], "snr0_pw") * 1e-12, row[3]};
    if (!(e.timing > 0.0) || !(e.snr0 > 0.0)) {
      throw ConfigError("detector catalog entry '" + e.name + "' needs positive timing and snr0");
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<DetectorCatalogEntry> read_catalog_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open detector catalog " + path.string());
  return read_catalog_csv(in);
}

double snr0(double signal_lambda, double eta_tot, const NoiseBudget& noise) {
  require(signal_lambda > 0.0, "signal wavelength must be positive");
  require(eta_tot > 0.0 && eta_tot <= 1.0,
          "eta_tot must lie in (0, 1]; a zero-efficiency detector cannot see any signal");
  require(noise.total_rate >= 0.0, "total noise rate must be non-negative");
  return photon_energy(signal_lambda) / eta_tot * noise.total_rate;
}

double sensitivity_floor(double signal_lambda, const SpectralBand& band,
                         const ThermalEnvironment& env) {
  return photon_energy(signal_lambda) * band.width() *
         mean_thermal_occupation(band.center_frequency(), env);
}

std::vector<SensitivityPoint> snr0_vs_efficiency(double signal_lambda, double dark_rate,
                                                 const SpectralBand& band,
                                                 const ThermalEnvironment& env,
                                                 std::span<const double> eta_grid) {
  require(!eta_grid.empty(), "efficiency grid is empty");
  require(dark_rate >= 0.0, "dark rate must be non-negative");
  std::vector<SensitivityPoint> curve;
  curve.reserve(eta_grid.size());
  for (double eta : eta_grid) {
    require(eta > 0.0 && eta <= 1.0, "efficiency grid values must lie in (0, 1]");
    const auto noise = compose_noise(dark_rate, background_rate_delta(eta, band, env));
    curve.push_back({eta, snr0(signal_lambda, eta, noise)});
  }
  return curve;
}

SensitivityReport assess_sensitivity(double signal_lambda, double eta_tot,
                                     const NoiseBudget& noise, const SpectralBand& band,
                                     const ThermalEnvironment& env,
                                     double dominance_threshold) {
  require(dominance_threshold > 0.0, "dominance threshold must be positive");
  return {snr0(signal_lambda, eta_tot, noise),
          sensitivity_floor(signal_lambda, band, env),
          noise.background_rate > dominance_threshold * noise.dark_rate,
          signal_lambda,
          eta_tot,
          noise};
}

std::vector<ComparisonRow> compare_detectors(const DetectorFigure& ours,
                                             std::span<const DetectorCatalogEntry> catalog) {
  require(!catalog.empty(), "detector catalog is empty");
  require(ours.snr0 > 0.0, "reference sensitivity must be positive");
  std::vector<ComparisonRow> rows;
  rows.reserve(catalog.size());
  for (const auto& e : catalog) rows.push_back({e, e.snr0 / ours.snr0});
  std::stable_sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
    return a.entry.snr0 < b.entry.snr0;
  });
  return rows;
}

}  // namespace mirpc
