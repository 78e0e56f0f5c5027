#include "mirpc/radiometry.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <fstream>

#include "mirpc/csv.hpp"
#include "mirpc/errors.hpp"

namespace mirpc {

using detail::require;

namespace {

constexpr double kOccupationCutoff = 700.0;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

struct TransferValidator {
  void operator()(const DeltaTransfer& d) const {
    require(is_probability(d.peak), "transfer function peak must lie in [0, 1]");
  }
  void operator()(const TabulatedTransfer& t) const {
    require(t.frequency.size() >= 2, "tabulated transfer function needs at least two points");
    require(t.frequency.size() == t.transmission.size(),
            "transfer function grid and transmission sizes differ");
    for (std::size_t i = 0; i < t.frequency.size(); ++i) {
      require(t.frequency[i] > 0.0, "transfer function frequencies must be positive");
      require(is_probability(t.transmission[i]), "transmission values must lie in [0, 1]");
      if (i > 0) {
        require(t.frequency[i] > t.frequency[i - 1],
                "transfer function grid must be strictly increasing");
      }
    }
  }
};

}  // namespace

void validate(const ThermalEnvironment& env) {
  require(env.temperature > 0.0, "environment.temperature must be > 0 K");
  require(is_probability(env.emissivity), "environment.emissivity must lie in [0, 1]");
}

void validate(const TransferFunction& tf) { std::visit(TransferValidator{}, tf); }

TabulatedTransfer read_transfer_function_csv(std::istream& in) {
  const auto doc = csv::read(in);
  if (doc.header.size() != 2) {
    throw ConfigError("transfer function CSV must have two columns (frequency_hz, transmission)");
  }
  TabulatedTransfer tf;
  for (const auto& row : doc.rows) {
    if (row.size() != 2) throw ConfigError("transfer function CSV row must have two fields");
    tf.frequency.push_back(csv::parse_double(row[0], "frequency_hz"));
    tf.transmission.push_back(csv::parse_double(row[1], "transmission"));
  }
  try {
    validate(TransferFunction{tf});
  } catch (const DomainError& e) {
    throw ConfigError(std::string("transfer function CSV: ") + e.what());
  }
  return tf;
}

TabulatedTransfer read_transfer_function_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open transfer function file " + path.string());
  return read_transfer_function_csv(in);
}

double mean_thermal_occupation(double frequency, const ThermalEnvironment& env) {
  require(frequency > 0.0, "frequency must be positive");
  validate(env);
  const double x = constants::planck * frequency / (constants::boltzmann * env.temperature);
  if (x > kOccupationCutoff) return 0.0;
  return env.emissivity / std::expm1(x);
}

double background_rate_delta(double eta_tot, const SpectralBand& band,
                             const ThermalEnvironment& env) {
  require(is_probability(eta_tot), "eta_tot must lie in [0, 1]");
  return eta_tot * band.width() * mean_thermal_occupation(band.center_frequency(), env);
}

double background_rate_integral(double eta_tot, const TransferFunction& tf,
                                const ThermalEnvironment& env) {
  require(is_probability(eta_tot), "eta_tot must lie in [0, 1]");
  validate(env);
  validate(tf);

  if (const auto* d = std::get_if<DeltaTransfer>(&tf)) {
    if (d->band.width() == 0.0 || d->peak == 0.0) return 0.0;
    const auto occupation = [&](double nu) { return mean_thermal_occupation(nu, env); };
    const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        occupation, d->band.lower(), d->band.upper(), 15, 1e-12);
    return eta_tot * d->peak * integral;
  }

  const auto& t = std::get<TabulatedTransfer>(tf);
  double integral = 0.0;
  double prev = t.transmission[0] * mean_thermal_occupation(t.frequency[0], env);
  for (std::size_t i = 1; i < t.frequency.size(); ++i) {
    const double cur = t.transmission[i] * mean_thermal_occupation(t.frequency[i], env);
    integral += 0.5 * (prev + cur) * (t.frequency[i] - t.frequency[i - 1]);
    prev = cur;
  }
  return eta_tot * integral;
}

NoiseBudget compose_noise(double dark_rate, double background_rate) {
  require(dark_rate >= 0.0, "dark rate must be non-negative");
  require(background_rate >= 0.0, "background rate must be non-negative");
  return {dark_rate, background_rate, dark_rate + background_rate};
}

}  // namespace mirpc
