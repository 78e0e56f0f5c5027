#pragma once

// Seeded Monte Carlo model of a pulsed photon-counting run and the
// start-stop (TAC) delay histogram built from it.
//
// Random streams: each process (signal, dark, background) gets its own
// std::mt19937_64 seeded from the run seed through SplitMix64. Sampling uses
// Boost.Random distributions, whose algorithms are fixed in the headers, so a
// seed reproduces the same event stream on every platform.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace mirpc {

enum class PulseShape { rectangular, gaussian };
enum class PhotonStatistics { poissonian, thermal };

struct PulseTrainSpec {
  double rep_rate;        // Hz
  double pulse_width;     // s; full width for rectangles, FWHM for gaussians
  double mean_photons;    // per pulse
  PulseShape shape = PulseShape::rectangular;
  PhotonStatistics statistics = PhotonStatistics::poissonian;
};

struct DetectionChainSpec {
  double eta_tot;          // probability
  double jitter_fwhm;      // s
  double dead_time;        // s
  double dark_rate;        // Hz
  double background_rate;  // Hz
};

void validate(const PulseTrainSpec& pulses);
void validate(const DetectionChainSpec& chain);

enum class EventOrigin : std::uint8_t { signal, dark, background };

struct EventRecord {
  double timestamp;  // s
  EventOrigin origin;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// Jitter standard deviation from a Gaussian FWHM.
double fwhm_to_sigma(double fwhm);

/// SplitMix64 step: derives well-mixed child seeds from a master seed.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for the `index`-th independent run of a sweep; depends only on the
/// master seed and the index.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

inline constexpr const char* kRngAlgorithm = "mt19937_64 streams seeded by splitmix64";

/// Draws a photon number with the given mean: Poisson, or geometric
/// (Bose-Einstein) with success probability 1 / (1 + mean).
std::int64_t sample_photon_number(double mean, PhotonStatistics statistics, std::mt19937_64& rng);

struct RunSummary {
  std::uint64_t seed = 0;
  std::string rng_algorithm;
  double duration = 0.0;                 // s
  std::int64_t pulses = 0;
  std::int64_t generated_photons = 0;    // signal photons emitted by the source
  std::int64_t detected_signal = 0;      // after thinning, before dead time
  std::int64_t detected_dark = 0;
  std::int64_t detected_background = 0;
  std::int64_t retained_signal = 0;      // after dead time
  std::int64_t retained_dark = 0;
  std::int64_t retained_background = 0;
  std::int64_t dead_time_losses = 0;
  std::int64_t outside_duration = 0;     // signal detections jittered out of [0, duration)

  std::int64_t retained_total() const {
    return retained_signal + retained_dark + retained_background;
  }
  double total_rate() const { return static_cast<double>(retained_total()) / duration; }
  double signal_rate() const { return static_cast<double>(retained_signal) / duration; }
};

struct SimulationRun {
  std::vector<EventRecord> events;  // sorted by timestamp
  RunSummary summary;
};

/// Simulates `duration` seconds of the pulsed source, thinning, jitter, dark
/// and background Poisson noise, and nonparalyzable dead time. Pulse k fires
/// its sync at k / rep_rate; events outside [0, duration) are discarded.
SimulationRun simulate_run(const PulseTrainSpec& pulses, const DetectionChainSpec& chain,
                           double duration, std::uint64_t seed);

/// Nonparalyzable dead time on a time-sorted stream: an event is kept only
/// if it is at least `dead_time` after the previously kept event.
std::vector<EventRecord> apply_dead_time(std::span<const EventRecord> sorted, double dead_time);

/// Mean click rate without dead time: pulses yielding at least one
/// detection plus the dark and background rates.
double expected_detection_rate(const PulseTrainSpec& pulses, const DetectionChainSpec& chain);

/// r_meas / (1 - r_meas * tau) for a nonparalyzable detector.
double dead_time_correction(double measured_rate, double dead_time);

struct TacConfig {
  double bin_width;   // s
  double window_min;  // s, delay = stop - start
  double window_max;  // s

  std::size_t bin_count() const;
};

void validate(const TacConfig& config);

struct Histogram {
  std::vector<double> bin_edges;       // s
  std::vector<std::int64_t> counts;
  std::int64_t overflow = 0;  // paired, but delay outside the window
  std::int64_t unpaired = 0;  // no stop after the start

  std::int64_t total() const;
};

/// Sync stops at offset + k * period for k in [0, count).
struct PeriodicStops {
  double period;
  std::int64_t count;
  double offset = 0.0;
};

/// Pairs each start with the first stop strictly later than it (a stop at
/// exactly the start time goes to the next one) and bins stop - start.
Histogram build_tac_histogram(std::span<const EventRecord> starts, std::span<const double> stops,
                              const TacConfig& config);

/// Same pairing against an implicit periodic sync train, without
/// materialising the stop list.
Histogram build_tac_histogram(std::span<const EventRecord> starts, const PeriodicStops& stops,
                              const TacConfig& config);

/// Sync train matching simulate_run for the given pulses and duration.
PeriodicStops sync_train(const PulseTrainSpec& pulses, double duration);

}  // namespace mirpc
