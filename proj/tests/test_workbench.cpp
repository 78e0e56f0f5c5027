#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mirpc/errors.hpp"
#include "mirpc/workbench/commands.hpp"
#include "mirpc/workbench/report.hpp"
#include "mirpc/workbench/scenario.hpp"

using namespace mirpc;
using namespace mirpc::workbench;

namespace {

const std::filesystem::path kFixtures = MIRPC_TEST_FIXTURES;

ScenarioFile paper() { return load_scenario(resolve_scenario("paper_25C"), true); }

std::string render(const Report& r, Format f) {
  std::ostringstream out;
  emit_report(r, f, out);
  return out.str();
}

std::string strip_timestamp(std::string text) {
  const auto pos = text.find("\"timestamp\"");
  if (pos == std::string::npos) return text;
  const auto end = text.find('\n', pos);
  return text.erase(pos, end - pos);
}

}  // namespace

TEST_CASE("bundled scenario resolves to SI values") {
  const auto f = paper();
  CHECK(f.name == "paper_25C");
  CHECK(f.scenario.crystal.length == doctest::Approx(0.01));
  CHECK(f.scenario.crystal.d_eff == doctest::Approx(16e-12));
  CHECK(std::exp(-f.scenario.crystal.attenuation * f.scenario.crystal.length) == doctest::Approx(0.6));
  CHECK(f.scenario.crystal.temperature == doctest::Approx(298.15));
  CHECK(f.scenario.pump.power == doctest::Approx(0.063));
  CHECK(f.scenario.signal.wavelength == doctest::Approx(4.65e-6));
  CHECK(f.scenario.filter_bandwidth == doctest::Approx(1.6e11).epsilon(1e-2));
  CHECK(f.scenario.detector.dark_rate == 55.0);
  CHECK(f.scenario.eta_opt == doctest::Approx(0.137));
  CHECK(*f.measured.eta_tot == doctest::Approx(3.6e-6));
  CHECK(*f.measured.total_noise == doctest::Approx(87.8));
  CHECK(f.simulation.seed.has_value());
  CHECK(f.warnings.empty());
}

TEST_CASE("missing scenario names are I/O errors") {
  CHECK_THROWS_AS(load_scenario(resolve_scenario("no_such_scenario")), IoError);
}

TEST_CASE("empty scenario file is rejected") {
  CHECK_THROWS_AS(load_scenario(kFixtures / "empty.toml"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("   \n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("[crystal\nlength_mm = 1"), ConfigError);
}

TEST_CASE("unknown keys fail in strict mode and warn otherwise") {
  CHECK_THROWS_AS(load_scenario(kFixtures / "unknown_key.toml", true), ConfigError);
  const auto f = load_scenario(kFixtures / "unknown_key.toml", false);
  REQUIRE(f.warnings.size() == 1);
  CHECK(f.warnings[0].find("crystal.colour") != std::string::npos);
}

TEST_CASE("constraint violations name the field") {
  try {
    load_scenario(kFixtures / "negative_power.toml");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("pump.power") != std::string::npos);
  }
}

TEST_CASE("defaults are echoed in resolved inputs") {
  const auto f = parse_scenario("name = \"minimal\"\n");
  CHECK(f.resolved.contains("crystal"));
  CHECK(f.resolved["crystal"]["length_mm"] == 10.0);
  CHECK(f.resolved["pump"]["power_mw"] == 63.0);
}

TEST_CASE("to_toml round trip") {
  const auto a = paper();
  const auto b = parse_scenario(to_toml(a), true);
  CHECK(echo(a) == echo(b));
  CHECK(a.scenario.crystal.attenuation == b.scenario.crystal.attenuation);
  CHECK(a.scenario.confocal_parameter == b.scenario.confocal_parameter);
  CHECK(a.tac.window_min == b.tac.window_min);
}

TEST_CASE("report JSON round trip and stability") {
  const auto f = paper();
  const auto r1 = run_command(Command::sensitivity, f, {});
  const auto r2 = run_command(Command::sensitivity, f, {});
  const auto j = nlohmann::ordered_json::parse(render(r1, Format::json));
  CHECK(j == to_json(r1));
  CHECK(j["command"] == "sensitivity");
  CHECK(strip_timestamp(render(r1, Format::json)) == strip_timestamp(render(r2, Format::json)));
}

TEST_CASE("CSV needs a table") {
  const auto r = run_command(Command::efficiency, paper(), {});
  CHECK_FALSE(r.table.has_value());
  std::ostringstream out;
  CHECK_THROWS_AS(emit_report(r, Format::csv, out), ConfigError);
  CHECK_THROWS_AS(parse_format("xml"), ConfigError);
}

TEST_CASE("text output carries units") {
  const auto r = run_command(Command::noise, paper(), {});
  const auto text = render(r, Format::text);
  CHECK(text.find("[Hz]") != std::string::npos);
  CHECK(text.find("[K]") != std::string::npos);
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line))
    if (line.find(" = ") != std::string::npos) CHECK(line.back() == ']');
}

TEST_CASE("efficiency command reports the theory gap") {
  const auto r = run_command(Command::efficiency, paper(), {});
  REQUIRE(r.find("theory_gap") != nullptr);
  CHECK(r.find("theory_gap")->value == doctest::Approx(2.4).epsilon(0.05));
  REQUIRE(r.find("eta_sfg_measured") != nullptr);
  CHECK(r.find("eta_sfg_measured")->value == doctest::Approx(5.06e-5).epsilon(2e-3));
  CHECK(r.find("measured_per_watt")->value == doctest::Approx(8.03e-4).epsilon(2e-3));
}

TEST_CASE("sensitivity command uses measured values and notes the reference") {
  const auto r = run_command(Command::sensitivity, paper(), {});
  CHECK(r.find("snr0")->value == doctest::Approx(1.042).epsilon(1e-3));
  CHECK(r.find("snr0")->unit == "pW");
  CHECK(r.find("reference_snr0")->value == doctest::Approx(1.24));
  CHECK_FALSE(r.notes.empty());
}

TEST_CASE("compare command builds a ranked table") {
  const auto r = run_command(Command::compare, paper(), {});
  REQUIRE(r.table.has_value());
  CHECK(r.table->rows.size() == 3);
  const auto csv = render(r, Format::csv);
  CHECK(csv.rfind("name,timing_ns,snr0_pw,ratio,note", 0) == 0);
  std::istringstream lines(csv);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) ++n;
  CHECK(n == 4);
}

TEST_CASE("simulate command histogram") {
  CommandOptions opt;
  opt.duration = 30.0;
  const auto r = run_command(Command::simulate, paper(), opt);
  REQUIRE(r.table.has_value());
  double previous = -1.0;
  for (const auto& row : r.table->rows) {
    const double start = std::get<double>(row[0]);
    CHECK(start > previous);
    previous = start;
  }
  CHECK(render(r, Format::csv) == render(run_command(Command::simulate, paper(), opt), Format::csv));
}

TEST_CASE("simulate without a seed is a configuration error") {
  auto f = paper();
  f.simulation.seed.reset();
  CHECK_THROWS_AS(run_command(Command::simulate, f, {}), ConfigError);
  CommandOptions opt;
  opt.seed = 7;
  opt.duration = 1.0;
  CHECK_NOTHROW(run_command(Command::simulate, f, opt));
}

TEST_CASE("optimize command") {
  const auto r = run_command(Command::optimize, paper(), {});
  CHECK(r.find("length_fixed_focus") != nullptr);
  CommandOptions opt;
  opt.sweep_parameter = "pump.power";
  opt.grid = {0.063, 0.126};
  const auto s = run_command(Command::optimize, paper(), opt);
  REQUIRE(s.table.has_value());
  CHECK(s.table->rows.size() == 2);
  opt.sweep_parameter = "pump.nothing";
  CHECK_THROWS_AS(run_command(Command::optimize, paper(), opt), ConfigError);
}

TEST_CASE("command names") {
  for (auto c : {Command::efficiency, Command::noise, Command::sensitivity, Command::simulate,
                 Command::optimize, Command::compare})
    CHECK(parse_command(command_name(c)) == c);
  CHECK_THROWS_AS(parse_command("explode"), ConfigError);
}
