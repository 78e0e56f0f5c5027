#pragma once

// Physical constants and spectral conversions. Everything is SI internally:
// metres, seconds, hertz, joules, kelvin, watts.

namespace mirpc {

/// CODATA 2018 values (h, c and k are exact by definition of the SI).
struct PhysicalConstants {
  double planck;               // J s
  double light_speed;          // m/s
  double boltzmann;            // J/K
  double vacuum_permittivity;  // F/m

  static constexpr PhysicalConstants codata2018() {
    return {6.62607015e-34, 299792458.0, 1.380649e-23, 8.8541878128e-12};
  }
};

namespace constants {
inline constexpr PhysicalConstants codata = PhysicalConstants::codata2018();
inline constexpr double planck = codata.planck;
inline constexpr double light_speed = codata.light_speed;
inline constexpr double boltzmann = codata.boltzmann;
inline constexpr double vacuum_permittivity = codata.vacuum_permittivity;
inline constexpr double zero_celsius = 273.15;  // K
}  // namespace constants

/// Optical band centred on `center_frequency` with full width `width`.
///
/// A zero width is accepted and denotes an infinitely narrow filter; every
/// rate computed from such a band is exactly zero.
class SpectralBand {
public:
  /// Throws DomainError unless width >= 0 and center_frequency > width / 2.
  SpectralBand(double center_frequency, double width);

  double center_frequency() const { return center_; }
  double width() const { return width_; }
  double lower() const { return center_ - 0.5 * width_; }
  double upper() const { return center_ + 0.5 * width_; }

private:
  double center_;
  double width_;
};

double wavelength_to_frequency(double wavelength);
double frequency_to_wavelength(double frequency);

/// Small-bandwidth conversion c * dlambda / lambda^2.
double bandwidth_wavelength_to_frequency(double delta_lambda, double center_lambda);
/// Inverse of bandwidth_wavelength_to_frequency: dnu * lambda^2 / c.
double bandwidth_frequency_to_wavelength(double delta_nu, double center_lambda);

double photon_energy(double wavelength);

/// Sum-frequency wavelength from energy conservation, 1/(1/lp + 1/ls).
/// An infinite signal wavelength returns the pump wavelength.
double sfg_wavelength(double pump_lambda, double signal_lambda);

double celsius_to_kelvin(double celsius);

}  // namespace mirpc
