#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mirpc/errors.hpp"
#include "mirpc/quantities.hpp"

using namespace mirpc;

TEST_CASE("constants are the CODATA 2018 set") {
  constexpr auto c = PhysicalConstants::codata2018();
  CHECK(c.planck == 6.62607015e-34);
  CHECK(c.light_speed == 299792458.0);
  CHECK(c.boltzmann == 1.380649e-23);
  CHECK(c.vacuum_permittivity == 8.8541878128e-12);
}

TEST_CASE("wavelength_to_frequency") {
  CHECK(wavelength_to_frequency(constants::light_speed) == doctest::Approx(1.0).epsilon(1e-15));
  // c / lambda evaluated by hand.
  CHECK(wavelength_to_frequency(4.65e-6) == doctest::Approx(6.4472e13).epsilon(1e-4));
  CHECK(wavelength_to_frequency(810e-9) == doctest::Approx(3.7012e14).epsilon(1e-4));
  CHECK_THROWS_AS(wavelength_to_frequency(0.0), DomainError);
  CHECK_THROWS_AS(wavelength_to_frequency(-1e-6), DomainError);
}

TEST_CASE("bandwidth conversion between wavelength and frequency") {
  CHECK(bandwidth_wavelength_to_frequency(0.35e-9, 810e-9) == doctest::Approx(1.599e11).epsilon(1e-3));
  CHECK(bandwidth_wavelength_to_frequency(0.0, 810e-9) == 0.0);
  CHECK(bandwidth_frequency_to_wavelength(1.47e12, 810e-9) == doctest::Approx(3.22e-9).epsilon(2e-3));
  CHECK_THROWS_AS(bandwidth_wavelength_to_frequency(-1e-9, 810e-9), DomainError);
  CHECK_THROWS_AS(bandwidth_wavelength_to_frequency(1e-9, 0.0), DomainError);
}

TEST_CASE("photon_energy") {
  CHECK(photon_energy(4.65e-6) == doctest::Approx(4.272e-20).epsilon(1e-3));
  CHECK(photon_energy(980e-9) == doctest::Approx(2.0270e-19).epsilon(1e-4));
  CHECK(photon_energy(std::numeric_limits<double>::infinity()) == 0.0);
  CHECK(photon_energy(1e-6) > photon_energy(2e-6));
  CHECK_THROWS_AS(photon_energy(0.0), DomainError);
}

TEST_CASE("sfg_wavelength") {
  CHECK(sfg_wavelength(980e-9, 4.65e-6) == doctest::Approx(809.4e-9).epsilon(1e-4));
  CHECK(sfg_wavelength(1.55e-6, 1.55e-6) == doctest::Approx(0.775e-6).epsilon(1e-15));
  CHECK(sfg_wavelength(980e-9, std::numeric_limits<double>::infinity()) == 980e-9);
  CHECK_THROWS_AS(sfg_wavelength(0.0, 1e-6), DomainError);
}

TEST_CASE("celsius_to_kelvin") {
  CHECK(celsius_to_kelvin(25.0) == doctest::Approx(298.15));
  CHECK(celsius_to_kelvin(93.0) == doctest::Approx(366.15));
  CHECK(celsius_to_kelvin(-273.15) == 0.0);
  CHECK_THROWS_AS(celsius_to_kelvin(-274.0), DomainError);
}

TEST_CASE("SpectralBand invariants") {
  const SpectralBand band(6.4e13, 1.6e11);
  CHECK(band.upper() - band.lower() == doctest::Approx(1.6e11));
  CHECK_NOTHROW(SpectralBand(1e12, 0.0));
  CHECK_THROWS_AS(SpectralBand(1e12, -1.0), DomainError);
  CHECK_THROWS_AS(SpectralBand(1e12, 2e12), DomainError);
}

TEST_CASE("property: conversions invert and sum-frequency shortens") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> log_lambda(std::log(100e-9), std::log(100e-6));
  const double hc = constants::planck * constants::light_speed;
  for (int i = 0; i < 2000; ++i) {
    const double a = std::exp(log_lambda(rng));
    const double b = std::exp(log_lambda(rng));
    CHECK(std::abs(frequency_to_wavelength(wavelength_to_frequency(a)) / a - 1.0) <= 1e-12);
    CHECK(std::abs(photon_energy(a) * a / hc - 1.0) <= 1e-12);
    const double s = sfg_wavelength(a, b);
    CHECK(s < a);
    CHECK(s < b);
  }
}
