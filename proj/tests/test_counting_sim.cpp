#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mirpc/counting_sim.hpp"
#include "mirpc/errors.hpp"
#include "oracles.hpp"

using namespace mirpc;

namespace {

const PulseTrainSpec kQcl{750e3, 1e-9, 1.0, PulseShape::rectangular, PhotonStatistics::poissonian};
const DetectionChainSpec kQuietChain{3.6e-6, 0.0, 0.0, 0.0, 0.0};

struct Moments {
  double mean;
  double variance;
};

Moments sample_moments(double mean, PhotonStatistics stats, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<double>(sample_photon_number(mean, stats, rng));
    s += k;
    s2 += k * k;
  }
  const double m = s / n;
  return {m, s2 / n - m * m};
}

}  // namespace

TEST_CASE("sample_photon_number moments") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    CHECK(sample_photon_number(0.0, PhotonStatistics::poissonian, rng) == 0);
    CHECK(sample_photon_number(0.0, PhotonStatistics::thermal, rng) == 0);
  }
  const auto poisson = sample_moments(1.0, PhotonStatistics::poissonian, 1'000'000, 17);
  CHECK(std::abs(poisson.mean - 1.0) < 0.004);
  CHECK(std::abs(poisson.variance - 1.0) < 0.01);
  const auto thermal = sample_moments(1.0, PhotonStatistics::thermal, 1'000'000, 19);
  CHECK(std::abs(thermal.mean - 1.0) < 0.006);
  CHECK(std::abs(thermal.variance / 2.0 - 1.0) < 0.03);
  CHECK_THROWS_AS(sample_photon_number(-0.5, PhotonStatistics::poissonian, rng), DomainError);
}

TEST_CASE("signal detections at one photon per pulse") {
  const auto run = simulate_run(kQcl, kQuietChain, 1000.0, 12345);
  CHECK(run.summary.pulses == 750'000'000);
  CHECK(std::abs(run.summary.retained_signal - 2700) <= 208);
  CHECK(run.summary.retained_dark == 0);
  CHECK(run.summary.retained_background == 0);
  for (const auto& e : run.events) CHECK(e.origin == EventOrigin::signal);
}

TEST_CASE("dark counts only") {
  PulseTrainSpec dark_only = kQcl;
  dark_only.mean_photons = 0.0;
  const auto run = simulate_run(dark_only, {3.6e-6, 0.3e-9, 0.0, 55.0, 0.0}, 100.0, 99);
  CHECK(std::abs(run.summary.retained_dark - 5500) <= 297);
  CHECK(run.summary.retained_signal == 0);
  CHECK(run.summary.generated_photons == 0);
}

TEST_CASE("dead chain yields nothing") {
  const auto run = simulate_run(kQcl, {0.0, 0.0, 0.0, 0.0, 0.0}, 10.0, 5);
  CHECK(run.events.empty());
  CHECK(run.summary.detected_signal == 0);
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(simulate_run(kQcl, kQuietChain, 0.0, 1), DomainError);
  PulseTrainSpec wide = kQcl;
  wide.pulse_width = 2e-6;
  CHECK_THROWS_AS(simulate_run(wide, kQuietChain, 1.0, 1), DomainError);
  CHECK_THROWS_AS(simulate_run(kQcl, {1.5, 0, 0, 0, 0}, 1.0, 1), DomainError);
  CHECK_THROWS_AS(simulate_run(kQcl, {0.5, 0, 0, -1, 0}, 1.0, 1), DomainError);
}

TEST_CASE("determinism and seed sensitivity") {
  const DetectionChainSpec chain{0.05, 0.3e-9, 20e-9, 55.0, 30.0};
  PulseTrainSpec p = kQcl;
  p.rep_rate = 1e5;
  const auto a = simulate_run(p, chain, 5.0, 777);
  const auto b = simulate_run(p, chain, 5.0, 777);
  const auto c = simulate_run(p, chain, 5.0, 778);
  CHECK(a.events == b.events);
  CHECK(a.summary.generated_photons == b.summary.generated_photons);
  CHECK(a.events != c.events);
}

TEST_CASE("streams are independent per process") {
  // Changing the dark rate leaves the signal events untouched.
  PulseTrainSpec p = kQcl;
  p.rep_rate = 1e5;
  const auto quiet = simulate_run(p, {0.05, 0.3e-9, 0.0, 0.0, 0.0}, 2.0, 31);
  const auto noisy = simulate_run(p, {0.05, 0.3e-9, 0.0, 500.0, 0.0}, 2.0, 31);
  std::vector<EventRecord> signal_only;
  std::copy_if(noisy.events.begin(), noisy.events.end(), std::back_inserter(signal_only),
               [](const EventRecord& e) { return e.origin == EventOrigin::signal; });
  CHECK(signal_only == quiet.events);
}

TEST_CASE("thinning matches eta within 4 sigma") {
  for (auto stats : {PhotonStatistics::poissonian, PhotonStatistics::thermal}) {
    PulseTrainSpec p{1e4, 1e-9, 2.0, PulseShape::rectangular, stats};
    const double eta = 0.3;
    const auto run = simulate_run(p, {eta, 0.0, 0.0, 0.0, 0.0}, 20.0, 4242);
    const auto n = static_cast<double>(run.summary.generated_photons);
    CHECK(n == doctest::Approx(2.0 * run.summary.pulses).epsilon(0.02));
    const double ratio = run.summary.detected_signal / n;
    CHECK(std::abs(ratio - eta) <= 4.0 * std::sqrt(eta * (1 - eta) / n));
  }
}

TEST_CASE("mean detections per pulse equal mu * eta") {
  for (auto stats : {PhotonStatistics::poissonian, PhotonStatistics::thermal}) {
    PulseTrainSpec p{1e4, 1e-9, 1.0, PulseShape::rectangular, stats};
    const auto run = simulate_run(p, {0.5, 0.0, 0.0, 0.0, 0.0}, 50.0, 808);
    const double per_pulse = static_cast<double>(run.summary.detected_signal) / run.summary.pulses;
    CHECK(per_pulse == doctest::Approx(0.5).epsilon(0.02));
  }
}

TEST_CASE("dead time only removes events") {
  PulseTrainSpec p = kQcl;
  p.mean_photons = 0.0;
  const DetectionChainSpec chain{0.0, 0.0, 0.0, 2e5, 1e5};
  const auto free = simulate_run(p, chain, 0.05, 3);
  DetectionChainSpec dead = chain;
  dead.dead_time = 2e-6;
  const auto limited = simulate_run(p, dead, 0.05, 3);
  CHECK(limited.events.size() < free.events.size());
  CHECK(limited.summary.dead_time_losses ==
        static_cast<std::int64_t>(free.events.size() - limited.events.size()));
  // Subsequence.
  auto it = free.events.begin();
  for (const auto& e : limited.events) {
    it = std::find(it, free.events.end(), e);
    REQUIRE(it != free.events.end());
  }
  for (std::size_t i = 1; i < limited.events.size(); ++i) {
    CHECK(limited.events[i].timestamp - limited.events[i - 1].timestamp >= 2e-6);
  }
  // Nonparalyzable throughput, r / (1 + r tau).
  const double r_true = 3e5, tau = 2e-6;
  const double expected = r_true / (1 + r_true * tau) * 0.05;
  CHECK(static_cast<double>(limited.events.size()) == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("dark inter-arrival times are exponential (KS at 0.01)") {
  PulseTrainSpec p = kQcl;
  p.mean_photons = 0.0;
  for (double rate : {10.0, 55.0}) {
    const auto run = simulate_run(p, {0.0, 0.0, 0.0, rate, 0.0}, 200.0, 2718);
    std::vector<double> gaps;
    double prev = 0.0;
    for (const auto& e : run.events) {
      gaps.push_back(e.timestamp - prev);
      prev = e.timestamp;
    }
    REQUIRE(gaps.size() > 1000);
    CHECK(oracle::ks_exponential(gaps, rate) < oracle::ks_critical_001(gaps.size()));
  }
}

TEST_CASE("expected_detection_rate") {
  CHECK(expected_detection_rate(kQcl, kQuietChain) == doctest::Approx(2.70).epsilon(1e-3));
  PulseTrainSpec bright = kQcl;
  bright.mean_photons = 1e9;
  CHECK(expected_detection_rate(bright, {0.5, 0, 0, 55.0, 30.0}) ==
        doctest::Approx(750e3 + 85.0).epsilon(1e-12));
  CHECK(expected_detection_rate(kQcl, {0.0, 0, 0, 55.0, 30.0}) == doctest::Approx(85.0));
}

TEST_CASE("dead_time_correction") {
  CHECK(dead_time_correction(1234.5, 0.0) == 1234.5);
  CHECK(dead_time_correction(125e3, 50e-9) == doctest::Approx(125.8e3).epsilon(1e-3));
  CHECK(dead_time_correction(5e5, 1e-6) == doctest::Approx(1e6));
  CHECK_THROWS_AS(dead_time_correction(1e6, 1e-6), DomainError);
}

TEST_CASE("TAC pairing and binning") {
  const TacConfig cfg{1e-9, 0.0, 10e-9};
  const std::vector<double> stops{10e-9, 20e-9, 30e-9};
  const std::vector<EventRecord> starts{
      {5e-9, EventOrigin::signal},    // delay 5 ns -> bin 5
      {10e-9, EventOrigin::signal},   // tie: pairs with 20 ns, delay 10 ns -> overflow
      {19.5e-9, EventOrigin::dark},   // delay 0.5 ns -> bin 0
      {28.5e-9, EventOrigin::signal}, // delay 1.5 ns -> bin 1
      {31e-9, EventOrigin::signal}};  // no later stop
  const auto h = build_tac_histogram(starts, stops, cfg);
  CHECK(h.counts.size() == 10);
  CHECK(h.bin_edges.size() == 11);
  CHECK(h.counts[5] == 1);
  CHECK(h.counts[0] == 1);
  CHECK(h.counts[1] == 1);
  CHECK(h.overflow == 1);
  CHECK(h.unpaired == 1);
  CHECK(h.total() + h.overflow + h.unpaired == static_cast<std::int64_t>(starts.size()));

  const std::vector<double> unsorted{20e-9, 10e-9};
  CHECK_THROWS_AS(build_tac_histogram(starts, unsorted, cfg), DomainError);
  const auto empty = build_tac_histogram({}, stops, cfg);
  CHECK(empty.total() == 0);
  CHECK_THROWS_AS(build_tac_histogram(starts, stops, TacConfig{0.3e-9, 0.0, 1e-9}), DomainError);
}

TEST_CASE("periodic and explicit stop lists agree") {
  PulseTrainSpec p = kQcl;
  p.rep_rate = 1e6;
  const double duration = 0.02;
  const auto run = simulate_run(p, {0.01, 0.3e-9, 0.0, 2e3, 1e3}, duration, 55);
  const auto train = sync_train(p, duration);
  std::vector<double> stops(static_cast<std::size_t>(train.count));
  for (std::int64_t k = 0; k < train.count; ++k) stops[k] = static_cast<double>(k) * train.period;
  const TacConfig cfg{0.05e-9, 990e-9, 1000e-9};
  const auto a = build_tac_histogram(run.events, stops, cfg);
  const auto b = build_tac_histogram(run.events, train, cfg);
  CHECK(a.counts == b.counts);
  CHECK(a.overflow == b.overflow);
  CHECK(a.unpaired == b.unpaired);
  CHECK(a.total() + a.overflow + a.unpaired == static_cast<std::int64_t>(run.events.size()));
}

TEST_CASE("zero jitter keeps every count inside the pulse window") {
  const auto run = simulate_run(kQcl, {1e-3, 0.0, 0.0, 0.0, 0.0}, 2.0, 8);
  const double period = 1.0 / kQcl.rep_rate;
  const TacConfig cfg{0.02e-9, 1330e-9, 1335e-9};
  const auto h = build_tac_histogram(run.events, sync_train(kQcl, 2.0), cfg);
  REQUIRE(h.total() > 1000);
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    if (h.counts[i] == 0) continue;
    CHECK(h.bin_edges[i + 1] > period - kQcl.pulse_width - 1e-15);
    CHECK(h.bin_edges[i] <= period + 1e-15);
  }
}

TEST_CASE("gaussian pulses centre on half the pulse width") {
  PulseTrainSpec p = kQcl;
  p.shape = PulseShape::gaussian;
  p.pulse_width = 2e-9;
  const auto run = simulate_run(p, {1e-2, 0.0, 0.0, 0.0, 0.0}, 1.0, 21);
  const double period = 1.0 / p.rep_rate;
  double sum = 0.0, sum2 = 0.0;
  for (const auto& e : run.events) {
    const double offset = e.timestamp - std::round((e.timestamp - 1e-9) / period) * period;
    sum += offset;
    sum2 += offset * offset;
  }
  const double n = static_cast<double>(run.events.size());
  REQUIRE(n > 5000);
  CHECK(sum / n == doctest::Approx(1e-9).epsilon(0.02));
  CHECK(std::sqrt(sum2 / n - (sum / n) * (sum / n)) ==
        doctest::Approx(fwhm_to_sigma(2e-9)).epsilon(0.03));
}

TEST_CASE("derived seeds depend only on master seed and index") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  std::uint64_t s = 0;
  // Reference SplitMix64 output for state 0.
  CHECK(splitmix64(s) == 0xe220a8397b1dcdafULL);
}
