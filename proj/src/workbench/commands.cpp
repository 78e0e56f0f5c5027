#include "mirpc/workbench/commands.hpp"

#include <cmath>
#include <sstream>

#include "mirpc/errors.hpp"

namespace mirpc::workbench {

namespace {

constexpr double kPico = 1e-12;
constexpr double kNano = 1e-9;

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

Report make_report(Command command, const ScenarioFile& file) {
  Report r;
  r.command = std::string(command_name(command));
  r.inputs = echo(file);
  r.warnings = file.warnings;
  r.provenance = {{"tool", kToolName}, {"version", kToolVersion}, {"scenario", file.name}};
  r.timestamp = utc_timestamp();
  return r;
}

// Sensitivity from the measured efficiency and noise when both are known.
std::optional<double> measured_snr0(const ScenarioFile& f) {
  if (!f.measured.eta_tot || !f.measured.total_noise) return std::nullopt;
  const auto noise = compose_noise(0.0, *f.measured.total_noise);
  return snr0(f.scenario.signal.wavelength, *f.measured.eta_tot, noise);
}

Report run_efficiency(const ScenarioFile& f) {
  Report r = make_report(Command::efficiency, f);
  const Scenario& s = f.scenario;
  const auto ev = evaluate(s);
  r.add("xi", s.focusing().xi, "1");
  r.add("h", ev.h, "1");
  r.add("pump_power", s.pump.power, "W");
  r.add("eta_sfg_model", ev.sfg.value, "1");
  r.add("eta_tot_model", ev.budget.eta_tot, "1");
  r.flags.emplace_back("eta_sfg_clamped", ev.sfg.clamped);
  if (ev.sfg.clamped) {
    r.warnings.push_back("up-conversion formula exceeds 1 (raw " + fixed(ev.sfg.raw, 4) +
                         "); value clamped, outside the perturbative regime");
  }

  // Lossless crystal at 1 W: the idealised normalised efficiency.
  CrystalSpec lossless = s.crystal;
  lossless.attenuation = 0.0;
  const auto ideal = sfg_quantum_efficiency(lossless, PumpBeam{s.pump.wavelength, 1.0}, s.signal, ev.h);
  const double theory_per_watt = per_watt_efficiency(ideal.value, 1.0);
  r.add("theory_per_watt_lossless", theory_per_watt, "1/W");
  if (s.pump.power > 0.0) {
    r.add("model_per_watt", per_watt_efficiency(ev.sfg.value, s.pump.power), "1/W");
  }

  if (f.measured.eta_tot) {
    const double eta_sfg = infer_sfg_efficiency(*f.measured.eta_tot, s.eta_opt, s.detector.eta_det);
    r.add("eta_tot_measured", *f.measured.eta_tot, "1");
    r.add("eta_sfg_measured", eta_sfg, "1");
    if (s.pump.power > 0.0 && eta_sfg > 0.0) {
      const double measured_per_watt = per_watt_efficiency(eta_sfg, s.pump.power);
      const double gap = theory_gap(theory_per_watt, measured_per_watt);
      r.add("measured_per_watt", measured_per_watt, "1/W");
      r.add("theory_gap", gap, "1");
      r.add("model_gap", theory_gap(per_watt_efficiency(ev.sfg.value, s.pump.power),
                                    measured_per_watt),
            "1");
      r.notes.push_back("lossless theory exceeds the measured up-conversion efficiency by a factor " +
                        fixed(gap, 2) + "; crystal absorption alone accounts for a factor " +
                        fixed(std::exp(s.crystal.attenuation * s.crystal.length), 2));
    }
  }
  return r;
}

Report run_noise(const ScenarioFile& f) {
  Report r = make_report(Command::noise, f);
  const Scenario& s = f.scenario;
  const auto ev = evaluate(s);
  const auto env = s.thermal();
  const auto band = s.band();
  r.add("temperature", env.temperature, "K");
  r.add("emissivity", env.emissivity, "1");
  r.add("signal_frequency", band.center_frequency(), "Hz");
  r.add("bandwidth", band.width(), "Hz");
  r.add("mean_occupation", mean_thermal_occupation(band.center_frequency(), env), "1");
  r.add("eta_tot_model", ev.budget.eta_tot, "1");

  const double eta = f.measured.eta_tot.value_or(ev.budget.eta_tot);
  const double delta = background_rate_delta(eta, band, env);
  const TransferFunction tf = s.transfer ? TransferFunction{*s.transfer}
                                         : TransferFunction{DeltaTransfer{band, 1.0}};
  const double integral = background_rate_integral(eta, tf, env);
  r.add("eta_tot_used", eta, "1");
  r.add("background_rate_delta", delta, "Hz");
  r.add("background_rate_integral", integral, "Hz");
  r.add("excess_background", s.excess_background, "Hz");

  const auto predicted =
      compose_noise(s.detector.dark_rate, (s.transfer ? integral : delta) + s.excess_background);
  r.add("dark_rate", predicted.dark_rate, "Hz");
  r.add("background_rate_predicted", predicted.background_rate, "Hz");
  r.add("total_rate_predicted", predicted.total_rate, "Hz");

  if (f.measured.total_noise) {
    const double measured_bg = *f.measured.total_noise - s.detector.dark_rate;
    r.add("total_rate_measured", *f.measured.total_noise, "Hz");
    r.add("background_rate_measured", measured_bg, "Hz");
    if (measured_bg < 0.0) {
      r.warnings.push_back("measured total noise is below the dark rate");
    } else if (predicted.background_rate > 0.0) {
      const double ratio = measured_bg / predicted.background_rate;
      r.add("measured_to_predicted_background", ratio, "1");
      if (ratio > 1.0) {
        r.notes.push_back("measured background exceeds the thermal prediction by " +
                          fixed(measured_bg - predicted.background_rate, 1) +
                          " Hz; leakage not in the thermal model (e.g. residual pump) can be "
                          "entered as environment.excess_background_hz");
      }
    }
  }
  return r;
}

Report run_sensitivity(const ScenarioFile& f, double threshold) {
  Report r = make_report(Command::sensitivity, f);
  const Scenario& s = f.scenario;
  const auto ev = evaluate(s);
  const auto band = s.band();
  const auto env = s.thermal();

  const auto model = assess_sensitivity(s.signal.wavelength, ev.budget.eta_tot, ev.noise, band,
                                        env, threshold);
  const auto measured = measured_snr0(f);

  r.add("snr0", (measured ? *measured : model.snr0) / kPico, "pW");
  if (measured) {
    r.add("snr0_measured", *measured / kPico, "pW");
    r.add("eta_tot_measured", *f.measured.eta_tot, "1");
    r.add("total_noise_measured", *f.measured.total_noise, "Hz");
  }
  r.add("snr0_model", model.snr0 / kPico, "pW");
  r.add("eta_tot_model", ev.budget.eta_tot, "1");
  r.add("dark_rate", model.noise.dark_rate, "Hz");
  r.add("background_rate_model", model.noise.background_rate, "Hz");
  r.add("floor", model.floor / kPico, "pW");
  r.flags.emplace_back("background_dominated", model.background_dominated);
  r.flags.emplace_back("from_measured", measured.has_value());

  if (measured && f.measured.reference_snr0) {
    const double ref = *f.measured.reference_snr0;
    r.add("reference_snr0", ref / kPico, "pW");
    r.add("reference_ratio", ref / *measured, "1");
    r.notes.push_back(
        "discrepancy: the rate-based SNR0 from the measured eta_tot and total noise is " +
        fixed(*measured / kPico, 3) + " pW, but the reference value is " + fixed(ref / kPico, 3) +
        " pW (ratio " + fixed(ref / *measured, 3) +
        "); the reference cannot be reproduced from these inputs and is not used");
  }
  if (model.background_dominated) {
    r.notes.push_back("thermal background dominates; SNR0 is near its efficiency-independent floor");
  }
  return r;
}

Report run_simulate(const ScenarioFile& f, const CommandOptions& o) {
  Report r = make_report(Command::simulate, f);
  const Scenario& s = f.scenario;
  const auto seed = o.seed ? o.seed : f.simulation.seed;
  if (!seed) throw ConfigError("simulate needs a seed: pass --seed or set simulation.seed");
  const double duration = o.duration.value_or(f.simulation.duration);
  detail::require(duration > 0.0 && std::isfinite(duration), "simulation duration must be > 0");

  const auto ev = evaluate(s);
  DetectionChainSpec chain{};
  chain.eta_tot = f.measured.eta_tot.value_or(ev.budget.eta_tot);
  chain.jitter_fwhm = s.detector.jitter_fwhm;
  chain.dead_time = s.detector.dead_time;
  if (f.simulation.include_noise) {
    chain.dark_rate = s.detector.dark_rate;
    chain.background_rate =
        f.measured.total_noise ? std::max(0.0, *f.measured.total_noise - s.detector.dark_rate)
                               : ev.noise.background_rate;
  }

  const auto& pulses = f.simulation.pulses;
  const auto run = simulate_run(pulses, chain, duration, *seed);
  const auto hist = build_tac_histogram(run.events, sync_train(pulses, duration), f.tac);
  const auto& sum = run.summary;

  r.inputs["command_options"] = {{"seed", *seed}, {"duration_s", duration}};
  r.provenance["seed"] = *seed;
  r.provenance["rng"] = sum.rng_algorithm;

  r.add("duration", duration, "s");
  r.add("eta_tot", chain.eta_tot, "1");
  r.add("dark_rate", chain.dark_rate, "Hz");
  r.add("background_rate", chain.background_rate, "Hz");
  r.add("pulses", static_cast<double>(sum.pulses), "count");
  r.add("generated_photons", static_cast<double>(sum.generated_photons), "count");
  r.add("detected_signal", static_cast<double>(sum.detected_signal), "count");
  r.add("retained_signal", static_cast<double>(sum.retained_signal), "count");
  r.add("retained_dark", static_cast<double>(sum.retained_dark), "count");
  r.add("retained_background", static_cast<double>(sum.retained_background), "count");
  r.add("dead_time_losses", static_cast<double>(sum.dead_time_losses), "count");
  r.add("signal_rate", sum.signal_rate(), "Hz");
  r.add("total_rate", sum.total_rate(), "Hz");
  r.add("expected_rate", expected_detection_rate(pulses, chain), "Hz");
  r.add("histogram_counts", static_cast<double>(hist.total()), "count");
  r.add("histogram_overflow", static_cast<double>(hist.overflow), "count");
  r.add("histogram_unpaired", static_cast<double>(hist.unpaired), "count");

  Table t{{"bin_start_ns", "bin_end_ns", "counts"}, {}};
  t.rows.reserve(hist.counts.size());
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    t.rows.push_back({hist.bin_edges[i] / kNano, hist.bin_edges[i + 1] / kNano, hist.counts[i]});
  }
  r.table = std::move(t);
  return r;
}

Report run_optimize(const ScenarioFile& f, const CommandOptions& o) {
  Report r = make_report(Command::optimize, f);
  const Scenario& s = f.scenario;
  const auto focus = optimal_focusing();
  r.add("xi_star", focus.xi_star, "1");
  r.add("h_star", focus.h_star, "1");
  r.add("attenuation", s.crystal.attenuation, "1/m");
  if (s.crystal.attenuation > 0.0) {
    r.add("length_fixed_focus", optimal_length_fixed_focus(s.crystal.attenuation), "m");
  } else {
    r.notes.push_back("no absorption: efficiency grows with crystal length at fixed focusing");
  }
  const auto joint = optimal_length_joint(s.crystal.attenuation, s.confocal_parameter);
  r.add("confocal_parameter", s.confocal_parameter, "m");
  r.add("length_joint", joint.length, "m");
  r.add("objective_joint", joint.objective, "m");
  r.flags.emplace_back("joint_interior_optimum", joint.interior);

  if (o.sweep_parameter) {
    if (o.grid.empty()) throw ConfigError("--sweep needs a --grid");
    const auto result = sweep(s, *o.sweep_parameter, o.grid, o.threads);
    Table t{{result.parameter, "eta_sfg", "eta_tot", "n_bg_hz", "snr0_pw", "flags"}, {}};
    for (const auto& row : result.rows) {
      t.rows.push_back({row.value, row.eta_sfg, row.eta_tot, row.n_bg, row.snr0 / kPico,
                        std::string(row.clamped ? "clamped" : "")});
    }
    r.table = std::move(t);
    return r;
  }

  std::vector<double> powers = o.powers;
  if (powers.empty()) powers = {s.pump.power > 0.0 ? s.pump.power : 0.063, 0.25, 0.5, 1.0, 2.0};
  const auto curve = pump_power_tradeoff(s, powers);
  Table t{{"power_w", "eta_tot", "snr0_pw", "floor_pw", "flags"}, {}};
  for (const auto& p : curve) {
    t.rows.push_back({p.power, p.eta_tot, p.snr0 / kPico, p.floor / kPico,
                      std::string(p.clamped ? "clamped" : "")});
    if (p.clamped) {
      r.warnings.push_back("pump power " + fixed(p.power, 3) +
                           " W drives the up-conversion formula above 1; point is clamped");
    }
  }
  r.table = std::move(t);
  return r;
}

Report run_compare(const ScenarioFile& f, const CommandOptions& o) {
  Report r = make_report(Command::compare, f);
  const Scenario& s = f.scenario;
  const auto catalog_path = o.catalog.value_or(default_catalog_path());
  const auto catalog = read_catalog_csv(catalog_path);
  const auto measured = measured_snr0(f);
  const double ours_snr0 = measured ? *measured : evaluate(s).snr0;
  const DetectorFigure ours{s.detector.jitter_fwhm, ours_snr0};
  r.inputs["catalog"] = catalog_path.string();
  r.add("snr0", ours.snr0 / kPico, "pW");
  r.add("timing", ours.timing / kNano, "ns");
  r.flags.emplace_back("from_measured", measured.has_value());

  Table t{{"name", "timing_ns", "snr0_pw", "ratio", "note"}, {}};
  for (const auto& row : compare_detectors(ours, catalog)) {
    t.rows.push_back({row.entry.name, row.entry.timing / kNano, row.entry.snr0 / kPico, row.ratio,
                      row.entry.note});
  }
  r.table = std::move(t);
  return r;
}

}  // namespace

Command parse_command(std::string_view name) {
  for (auto c : {Command::efficiency, Command::noise, Command::sensitivity, Command::simulate,
                 Command::optimize, Command::compare}) {
    if (command_name(c) == name) return c;
  }
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

std::string_view command_name(Command command) {
  switch (command) {
    case Command::efficiency: return "efficiency";
    case Command::noise: return "noise";
    case Command::sensitivity: return "sensitivity";
    case Command::simulate: return "simulate";
    case Command::optimize: return "optimize";
    case Command::compare: return "compare";
  }
  return "unknown";
}

std::filesystem::path default_catalog_path() { return data_dir() / "detector_catalog.csv"; }

Report run_command(Command command, const ScenarioFile& scenario, const CommandOptions& options) {
  switch (command) {
    case Command::efficiency: return run_efficiency(scenario);
    case Command::noise: return run_noise(scenario);
    case Command::sensitivity: return run_sensitivity(scenario, options.dominance_threshold);
    case Command::simulate: return run_simulate(scenario, options);
    case Command::optimize: return run_optimize(scenario, options);
    case Command::compare: return run_compare(scenario, options);
  }
  throw ConfigError("unknown command");
}

}  // namespace mirpc::workbench
