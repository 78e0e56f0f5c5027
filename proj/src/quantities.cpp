#include "mirpc/quantities.hpp"

#include <cmath>
#include <string>

#include "mirpc/errors.hpp"

namespace mirpc {

using detail::require;

SpectralBand::SpectralBand(double center_frequency, double width)
    : center_(center_frequency), width_(width) {
  require(std::isfinite(width) && width >= 0.0, "spectral band width must be >= 0");
  require(std::isfinite(center_frequency) && center_frequency > 0.5 * width,
          "spectral band centre must exceed half its width");
}

double wavelength_to_frequency(double wavelength) {
  require(wavelength > 0.0, "wavelength must be positive");
  return constants::light_speed / wavelength;
}

double frequency_to_wavelength(double frequency) {
  require(frequency > 0.0, "frequency must be positive");
  return constants::light_speed / frequency;
}

double bandwidth_wavelength_to_frequency(double delta_lambda, double center_lambda) {
  require(center_lambda > 0.0, "centre wavelength must be positive");
  require(delta_lambda >= 0.0, "bandwidth must be non-negative");
  return constants::light_speed * delta_lambda / (center_lambda * center_lambda);
}

double bandwidth_frequency_to_wavelength(double delta_nu, double center_lambda) {
  require(center_lambda > 0.0, "centre wavelength must be positive");
  require(delta_nu >= 0.0, "bandwidth must be non-negative");
  return delta_nu * center_lambda * center_lambda / constants::light_speed;
}

double photon_energy(double wavelength) {
  require(wavelength > 0.0, "wavelength must be positive");
  return constants::planck * constants::light_speed / wavelength;
}

double sfg_wavelength(double pump_lambda, double signal_lambda) {
  require(pump_lambda > 0.0 && signal_lambda > 0.0, "wavelengths must be positive");
  return 1.0 / (1.0 / pump_lambda + 1.0 / signal_lambda);
}

double celsius_to_kelvin(double celsius) {
  require(celsius >= -constants::zero_celsius, "temperature below absolute zero");
  return celsius + constants::zero_celsius;
}

}  // namespace mirpc
