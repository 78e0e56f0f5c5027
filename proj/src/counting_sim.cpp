#include "mirpc/counting_sim.hpp"

#include <algorithm>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/geometric_distribution.hpp>
#include <boost/random/negative_binomial_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <cmath>

#include "mirpc/errors.hpp"

namespace mirpc {

using detail::require;

namespace {

// 2 * sqrt(2 * ln 2)
constexpr double kFwhmPerSigma = 2.3548200450309493;

// Per-process stream identifiers mixed into the run seed.
enum class Stream : std::uint64_t { signal = 1, dark = 2, background = 3 };

std::mt19937_64 make_stream(std::uint64_t seed, Stream stream) {
  return std::mt19937_64(derive_seed(seed, static_cast<std::uint64_t>(stream)));
}

double uniform01(std::mt19937_64& rng) { return boost::random::uniform_01<double>{}(rng); }

std::int64_t poisson(double mean, std::mt19937_64& rng) {
  if (mean <= 0.0) return 0;
  return boost::random::poisson_distribution<std::int64_t, double>(mean)(rng);
}

// Geometric number of failures with success probability p, p in (0, 1].
std::int64_t failures_before_success(double p, std::mt19937_64& rng) {
  if (p >= 1.0) return 0;
  return boost::random::geometric_distribution<std::int64_t, double>(p)(rng);
}

// Photon number conditioned on being at least one.
std::int64_t sample_nonzero(double mean, PhotonStatistics statistics, std::mt19937_64& rng) {
  if (statistics == PhotonStatistics::thermal) {
    // Memoryless: K | K >= 1 is 1 + a fresh geometric draw with the same mean.
    return 1 + failures_before_success(1.0 / (1.0 + mean), rng);
  }
  if (mean >= 1.0) {
    std::int64_t k = 0;
    while (k == 0) k = poisson(mean, rng);
    return k;
  }
  // Inversion for the zero-truncated Poisson law; P(1) = mean / expm1(mean).
  const double u = uniform01(rng);
  std::int64_t k = 1;
  double p = mean / std::expm1(mean);
  double cdf = p;
  while (u > cdf && p > 0.0) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

void append_poisson_process(std::vector<EventRecord>& out, double rate, double duration,
                            EventOrigin origin, std::mt19937_64& rng) {
  if (rate <= 0.0) return;
  boost::random::exponential_distribution<double> gap(rate);
  for (double t = gap(rng); t < duration; t += gap(rng)) out.push_back({t, origin});
}

std::int64_t& origin_counter(RunSummary& s, EventOrigin origin, bool retained) {
  switch (origin) {
    case EventOrigin::signal: return retained ? s.retained_signal : s.detected_signal;
    case EventOrigin::dark: return retained ? s.retained_dark : s.detected_dark;
    case EventOrigin::background: break;
  }
  return retained ? s.retained_background : s.detected_background;
}

std::int64_t pulse_count(double rep_rate, double duration) {
  const double period = 1.0 / rep_rate;
  auto n = static_cast<std::int64_t>(std::ceil(duration * rep_rate));
  while (n > 0 && static_cast<double>(n - 1) * period >= duration) --n;
  while (static_cast<double>(n) * period < duration) ++n;
  return n;
}

}  // namespace

void validate(const PulseTrainSpec& p) {
  require(p.rep_rate > 0.0, "simulation.rep_rate must be > 0");
  require(p.pulse_width > 0.0 && p.pulse_width < 1.0 / p.rep_rate,
          "simulation.pulse_width must lie in (0, 1 / rep_rate)");
  require(p.mean_photons >= 0.0 && std::isfinite(p.mean_photons),
          "simulation.mean_photons must be finite and >= 0");
}

void validate(const DetectionChainSpec& c) {
  require(c.eta_tot >= 0.0 && c.eta_tot <= 1.0, "chain eta_tot must lie in [0, 1]");
  require(c.jitter_fwhm >= 0.0, "chain jitter_fwhm must be >= 0");
  require(c.dead_time >= 0.0, "chain dead_time must be >= 0");
  require(c.dark_rate >= 0.0, "chain dark_rate must be >= 0");
  require(c.background_rate >= 0.0, "chain background_rate must be >= 0");
}

double fwhm_to_sigma(double fwhm) { return fwhm / kFwhmPerSigma; }

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t state = master_seed;
  const std::uint64_t base = splitmix64(state);
  state = base ^ (index * 0xd1342543de82ef95ULL);
  return splitmix64(state);
}

std::int64_t sample_photon_number(double mean, PhotonStatistics statistics, std::mt19937_64& rng) {
  require(mean >= 0.0 && std::isfinite(mean), "mean photon number must be finite and >= 0");
  if (mean == 0.0) return 0;
  if (statistics == PhotonStatistics::thermal) {
    return failures_before_success(1.0 / (1.0 + mean), rng);
  }
  return poisson(mean, rng);
}

SimulationRun simulate_run(const PulseTrainSpec& pulses, const DetectionChainSpec& chain,
                           double duration, std::uint64_t seed) {
  validate(pulses);
  validate(chain);
  require(duration > 0.0 && std::isfinite(duration), "simulation duration must be > 0");

  SimulationRun run;
  RunSummary& s = run.summary;
  s.seed = seed;
  s.rng_algorithm = kRngAlgorithm;
  s.duration = duration;
  s.pulses = pulse_count(pulses.rep_rate, duration);

  std::vector<EventRecord> raw;

  // Signal: only pulses with at least one detection are visited. The gap to
  // the next such pulse is geometric in the per-pulse hit probability.
  {
    auto rng = make_stream(seed, Stream::signal);
    const double period = 1.0 / pulses.rep_rate;
    const double mean_detected = pulses.mean_photons * chain.eta_tot;
    const double p_hit = pulses.statistics == PhotonStatistics::thermal
                             ? mean_detected / (1.0 + mean_detected)
                             : -std::expm1(-mean_detected);
    const double jitter_sigma = fwhm_to_sigma(chain.jitter_fwhm);
    const double shape_sigma = fwhm_to_sigma(pulses.pulse_width);
    boost::random::normal_distribution<double> normal(0.0, 1.0);

    if (p_hit > 0.0) {
      for (std::int64_t k = failures_before_success(p_hit, rng); k < s.pulses;
           k += 1 + failures_before_success(p_hit, rng)) {
        const double sync = static_cast<double>(k) * period;
        const std::int64_t detected = sample_nonzero(mean_detected, pulses.statistics, rng);
        s.detected_signal += detected;
        for (std::int64_t i = 0; i < detected; ++i) {
          double t = sync;
          if (pulses.shape == PulseShape::rectangular) {
            t += pulses.pulse_width * uniform01(rng);
          } else {
            t += 0.5 * pulses.pulse_width + shape_sigma * normal(rng);
          }
          if (jitter_sigma > 0.0) t += jitter_sigma * normal(rng);
          if (t >= 0.0 && t < duration) {
            raw.push_back({t, EventOrigin::signal});
          } else {
            ++s.outside_duration;
          }
        }
      }
    }

    // Undetected photons are only counted. For Poisson light they are an
    // independent Poisson variable; for thermal light, conditioned on the
    // detected total K they are negative binomial with N + K successes.
    const auto n = static_cast<double>(s.pulses);
    std::int64_t undetected = 0;
    if (pulses.statistics == PhotonStatistics::poissonian) {
      undetected = poisson(pulses.mean_photons * (1.0 - chain.eta_tot) * n, rng);
    } else {
      const double q = pulses.mean_photons / (1.0 + pulses.mean_photons);
      const double r = (1.0 - chain.eta_tot) * q;
      if (r > 0.0) {
        undetected = boost::random::negative_binomial_distribution<std::int64_t, double>(
            s.pulses + s.detected_signal, 1.0 - r)(rng);
      }
    }
    s.generated_photons = s.detected_signal + undetected;
  }

  const std::size_t signal_end = raw.size();
  {
    auto rng = make_stream(seed, Stream::dark);
    append_poisson_process(raw, chain.dark_rate, duration, EventOrigin::dark, rng);
  }
  s.detected_dark = static_cast<std::int64_t>(raw.size() - signal_end);
  const std::size_t dark_end = raw.size();
  {
    auto rng = make_stream(seed, Stream::background);
    append_poisson_process(raw, chain.background_rate, duration, EventOrigin::background, rng);
  }
  s.detected_background = static_cast<std::int64_t>(raw.size() - dark_end);

  std::sort(raw.begin(), raw.end(), [](const EventRecord& a, const EventRecord& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.origin < b.origin;
  });

  run.events = apply_dead_time(raw, chain.dead_time);
  for (const auto& e : run.events) ++origin_counter(s, e.origin, true);
  s.dead_time_losses = static_cast<std::int64_t>(raw.size() - run.events.size());
  return run;
}

std::vector<EventRecord> apply_dead_time(std::span<const EventRecord> sorted, double dead_time) {
  require(dead_time >= 0.0, "dead time must be non-negative");
  std::vector<EventRecord> kept;
  kept.reserve(sorted.size());
  for (const auto& e : sorted) {
    if (kept.empty() || e.timestamp - kept.back().timestamp >= dead_time) kept.push_back(e);
  }
  return kept;
}

double expected_detection_rate(const PulseTrainSpec& pulses, const DetectionChainSpec& chain) {
  validate(pulses);
  validate(chain);
  const double mean_detected = pulses.mean_photons * chain.eta_tot;
  const double p_click = pulses.statistics == PhotonStatistics::thermal
                             ? mean_detected / (1.0 + mean_detected)
                             : -std::expm1(-mean_detected);
  return pulses.rep_rate * p_click + chain.dark_rate + chain.background_rate;
}

double dead_time_correction(double measured_rate, double dead_time) {
  require(measured_rate >= 0.0, "measured rate must be non-negative");
  require(dead_time >= 0.0, "dead time must be non-negative");
  const double occupancy = measured_rate * dead_time;
  require(occupancy < 1.0, "detector saturated: measured_rate * dead_time >= 1");
  return measured_rate / (1.0 - occupancy);
}

std::size_t TacConfig::bin_count() const {
  return static_cast<std::size_t>(std::llround((window_max - window_min) / bin_width));
}

void validate(const TacConfig& c) {
  require(c.bin_width > 0.0, "tac.bin_width must be > 0");
  require(c.window_max > c.window_min, "tac.window max must exceed min");
  const double bins = (c.window_max - c.window_min) / c.bin_width;
  require(std::abs(bins - std::round(bins)) <= 1e-6 * std::max(1.0, bins),
          "tac window span must be an integer multiple of bin_width");
}

std::int64_t Histogram::total() const {
  std::int64_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

namespace {

Histogram empty_histogram(const TacConfig& config) {
  validate(config);
  Histogram h;
  const std::size_t n = config.bin_count();
  h.counts.assign(n, 0);
  h.bin_edges.resize(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    h.bin_edges[i] = config.window_min + static_cast<double>(i) * config.bin_width;
  }
  h.bin_edges[n] = config.window_max;
  return h;
}

void record_delay(Histogram& h, const TacConfig& config, double delay) {
  if (delay < config.window_min || delay >= config.window_max) {
    ++h.overflow;
    return;
  }
  auto idx = static_cast<std::size_t>(std::floor((delay - config.window_min) / config.bin_width));
  idx = std::min(idx, h.counts.size() - 1);
  ++h.counts[idx];
}

}  // namespace

Histogram build_tac_histogram(std::span<const EventRecord> starts, std::span<const double> stops,
                              const TacConfig& config) {
  require(std::is_sorted(stops.begin(), stops.end()), "stop times must be sorted ascending");
  Histogram h = empty_histogram(config);
  for (const auto& start : starts) {
    const auto next = std::upper_bound(stops.begin(), stops.end(), start.timestamp);
    if (next == stops.end()) {
      ++h.unpaired;
      continue;
    }
    record_delay(h, config, *next - start.timestamp);
  }
  return h;
}

Histogram build_tac_histogram(std::span<const EventRecord> starts, const PeriodicStops& stops,
                              const TacConfig& config) {
  require(stops.period > 0.0, "stop period must be positive");
  require(stops.count >= 0, "stop count must be non-negative");
  Histogram h = empty_histogram(config);
  const auto stop_at = [&](std::int64_t j) {
    return stops.offset + static_cast<double>(j) * stops.period;
  };
  for (const auto& start : starts) {
    const double t = start.timestamp;
    std::int64_t j =
        std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((t - stops.offset) / stops.period)) + 1);
    while (j > 0 && stop_at(j - 1) > t) --j;
    while (j < stops.count && stop_at(j) <= t) ++j;
    if (j >= stops.count) {
      ++h.unpaired;
      continue;
    }
    record_delay(h, config, stop_at(j) - t);
  }
  return h;
}

PeriodicStops sync_train(const PulseTrainSpec& pulses, double duration) {
  validate(pulses);
  require(duration > 0.0, "duration must be positive");
  return {1.0 / pulses.rep_rate, pulse_count(pulses.rep_rate, duration), 0.0};
}

}  // namespace mirpc
